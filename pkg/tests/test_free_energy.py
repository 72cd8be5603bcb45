"""Closed forms of F^(k), their certificates and numeric evaluation."""

import mpmath as mp
import pytest
import sympy as sp

from scripts.errors import DegeneratePotentialError, UnsupportedOrderError, UsageError
from scripts.expansion.potential import build_W, load_potential
from scripts.free_energy.certificate import verify_total_derivative
from scripts.free_energy.closed_forms import (R0, W_SYMBOLS, closed_form_F, generic_closed_form,
                                              specialization_residual, specialize_model)
from scripts.free_energy.integrand import generic_integrands
from scripts.free_energy.numeric import integrate_xi, numeric_free_energy

W1 = W_SYMBOLS[0]


def test_generic_genus_one():
    form = generic_closed_form(1)
    assert form.rational == 0
    assert form.logs == ((sp.Rational(1, 12), R0 * W1),)


def test_genus_zero_needs_concrete_W():
    with pytest.raises(UsageError):
        generic_closed_form(0)


@pytest.mark.parametrize('k', [-1, 4])
def test_unsupported_orders(k):
    with pytest.raises(UnsupportedOrderError):
        closed_form_F(k)


@pytest.mark.parametrize('k', [0, 1, 2, 3])
def test_gaussian_closed_forms_vanish(k):
    form = closed_form_F(k, build_W(load_potential('gaussian')))
    assert abs(form.evaluate({R0: sp.Rational(1, 2)}, 30)) < mp.mpf('1e-28')


def test_quartic_genus_one_value():
    form = closed_form_F(1, build_W(load_potential('quartic')))
    value = form.evaluate({R0: sp.Rational(1, 4)}, 40)
    with mp.workdps(40):
        assert abs(value - mp.log(mp.mpf(3) / 2) / 12) < mp.mpf('1e-38')


def test_critical_point_is_rejected():
    with pytest.raises(DegeneratePotentialError):
        closed_form_F(1, build_W(load_potential('bmp60')), 1)


@pytest.mark.parametrize('k', [1, 2])
def test_total_derivative_certificates(k):
    certificate = verify_total_derivative(k)
    assert certificate.holds
    assert certificate.pieces


@pytest.mark.slow
def test_genus_three_certificate():
    assert verify_total_derivative(3).holds


@pytest.mark.parametrize('k', [0, 4])
def test_certificate_orders(k):
    with pytest.raises(UnsupportedOrderError):
        verify_total_derivative(k)


@pytest.mark.parametrize('model, nu', [
    ('quartic', 2),
    ('two_valence', 3),
    ('two_valence', 4),
    ('sixtic', 2),
])
@pytest.mark.parametrize('k', [0, 1, 2])
def test_family_forms_match_generic(model, nu, k):
    rational, log_ratio = specialization_residual(model, k, nu)
    assert rational == 0
    assert log_ratio == 0


def test_specialize_with_couplings():
    form = specialize_model('quartic', 1, couplings={'g2': 1})
    assert sp.simplify(form.expression.subs(R0, sp.Rational(1, 4)) - sp.log(sp.Rational(3, 2)) / 12) == 0


def test_unknown_model():
    with pytest.raises(UsageError):
        specialize_model('octic', 1)


def test_numeric_gaussian():
    values = numeric_free_energy(load_potential('gaussian'), precision=30)
    assert values.root.exact == sp.Rational(1, 2)
    assert all(abs(v) < mp.mpf('1e-28') for v in values.values.values())


def test_numeric_quartic_partial_sum():
    values = numeric_free_energy(load_potential('quartic'), kmax=2, precision=30)
    with mp.workdps(30):
        expected = values.values[0] + values.values[1] / 100 + values.values[2] / 10 ** 4
        assert abs(values.partial_sum(10, 2) - expected) < mp.mpf('1e-27')


def test_quadrature_reproduces_genus_one():
    R1 = generic_integrands(1)[0]
    value = integrate_xi(R1, build_W(load_potential('quartic')), sp.Rational(1, 4), 30)
    with mp.workdps(30):
        assert abs(value - mp.log(mp.mpf(3) / 2) / 12) < mp.mpf('1e-20')
