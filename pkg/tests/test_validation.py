"""Finite-N recurrence data, the exact identities and the large-N comparison."""

import math
from dataclasses import replace

import mpmath as mp
import pytest
import sympy as sp

from scripts.errors import BandOverflowError, UsageError
from scripts.expansion.potential import Potential, load_potential
from scripts.validation.asymptotics import (asymptotic_compare, fit_exponent, format_exponent,
                                            free_energy_biz, free_energy_scaling,
                                            gaussian_free_energy)
from scripts.validation.identities import resolvent_identity_check, string_residual
from scripts.validation.jacobi import stieltjes_recurrence
from scripts.validation.quadrature import tanh_sinh_nodes

TIGHT = mp.mpf('1e-18')


@pytest.fixture(scope='module')
def gaussian_10():
    return stieltjes_recurrence(load_potential('gaussian'), 10, precision=30)


@pytest.fixture(scope='module')
def quartic_10():
    return stieltjes_recurrence(load_potential('quartic'), 10, precision=30)


def test_gaussian_recurrence(gaussian_10):
    assert gaussian_10.n_max == 12
    assert gaussian_10.r[0] == 0
    for n in range(1, gaussian_10.n_max + 1):
        assert abs(gaussian_10.r_at(n) - mp.mpf(n) / 20) < TIGHT
    assert abs(gaussian_10.h[0] - mp.sqrt(mp.pi / 10)) < TIGHT


def test_r_at_range(gaussian_10):
    with pytest.raises(UsageError):
        gaussian_10.r_at(13)


@pytest.mark.parametrize('kwargs', [{'N': 0}, {'N': 5, 'precision': 20}])
def test_recurrence_arguments(kwargs):
    with pytest.raises(UsageError):
        stieltjes_recurrence(load_potential('quartic'), **kwargs)


def test_recurrence_needs_numeric_couplings():
    with pytest.raises(UsageError):
        stieltjes_recurrence(Potential({2: sp.Symbol('g2')}), 5)


@pytest.mark.parametrize('name', ['gaussian_10', 'quartic_10'])
def test_string_equation(request, name):
    report = string_residual(request.getfixturevalue(name))
    assert report.passes(TIGHT)


def test_string_equation_sees_a_perturbation(quartic_10):
    r = list(quartic_10.r)
    r[5] = r[5] * (1 + mp.mpf('1e-3'))
    report = string_residual(replace(quartic_10, r=tuple(r)))
    assert report.residuals[5] > mp.mpf('1e-6')
    assert report.residuals[2] < TIGHT
    assert report.residuals[8] < TIGHT


def test_string_equation_band():
    jd = stieltjes_recurrence(load_potential('quartic'), 2, n_max=2, precision=30)
    with pytest.raises(BandOverflowError):
        string_residual(jd)


@pytest.mark.parametrize('name', ['gaussian_10', 'quartic_10'])
def test_resolvent_identities(request, name):
    report = resolvent_identity_check(request.getfixturevalue(name), 3)
    assert set(report.residuals) == {(kind, j) for kind in ('quadratic', 'linear') for j in range(3)}
    assert report.passes(TIGHT)


def test_resolvent_band(gaussian_10):
    with pytest.raises(BandOverflowError):
        resolvent_identity_check(gaussian_10, 8)


def test_gaussian_free_energy_difference(gaussian_10):
    comparison = free_energy_biz(gaussian_10, kmax=1)
    assert abs(comparison.difference) < TIGHT
    assert all(d < TIGHT for d in comparison.deviations.values())


def test_gaussian_free_energy_small_N():
    # F_1 = -ln h_0 with h_0 = sqrt(pi)
    with mp.workdps(30):
        assert abs(gaussian_free_energy(1, 30) + mp.log(mp.pi) / 2) < TIGHT


def test_gaussian_asymptotics_hit_the_floor(gaussian_10):
    report = asymptotic_compare(gaussian_10, K=1)
    assert report.max_residual < TIGHT
    assert report.notes


def test_quartic_partial_sums_improve(quartic_10):
    comparison = free_energy_biz(quartic_10, kmax=2)
    assert comparison.deviations[2] < comparison.deviations[1] < comparison.deviations[0]


def test_fit_exponent():
    p, err = fit_exponent([10, 20, 40], [3e-2, 3e-2 / 16, 3e-2 / 256])
    assert abs(p - 4) < 1e-9
    assert err < 1e-9


def test_two_point_fit_has_no_error_estimate():
    p, err = fit_exponent([20, 40], [1e-3, 1e-3 / 64])
    assert abs(p - 6) < 1e-9
    assert math.isnan(err)
    assert format_exponent(p, err) == '6.000 +- n/a'
    assert format_exponent(4, 0.0126) == '4.000 +- 0.013'


def test_tanh_sinh_rule():
    with mp.workdps(40):
        nodes, weights = tanh_sinh_nodes(mp.mpf(2), 6, 40)
        assert len(nodes) == len(weights)
        assert all(abs(x) < 2 for x in nodes)
        assert abs(mp.fsum(weights) - 4) < mp.mpf('1e-30')
        # int_{-2}^{2} x^2 / (1 + x^2) dx = 4 - 2 atan 2
        integral = mp.fdot(weights, [x ** 2 / (1 + x ** 2) for x in nodes])
        assert abs(integral - (4 - 2 * mp.atan(2))) < mp.mpf('1e-30')


def test_free_energy_comparison_defaults_to_every_closed_form(quartic_10):
    comparison = free_energy_biz(quartic_10)
    assert set(comparison.deviations) == {0, 1, 2, 3}
    assert comparison.deviations[3] < comparison.deviations[2]


@pytest.fixture(scope='module', params=['quartic', 'sixtic_positive'])
def large_N_runs(request):
    pot = load_potential(request.param)
    return [stieltjes_recurrence(pot, N, precision=40) for N in (10, 20, 40)]


@pytest.mark.slow
def test_recurrence_decay_exponents(large_N_runs):
    report = asymptotic_compare(large_N_runs, K=2)
    exponents = [report.exponents[K][0] for K in range(3)]
    for K, p in enumerate(exponents):
        assert abs(p - 2 * (K + 1)) < 0.5
    assert all(abs(b - a - 2) < 0.5 for a, b in zip(exponents, exponents[1:]))


@pytest.mark.slow
def test_free_energy_decay_exponents(large_N_runs):
    comparisons = [free_energy_biz(d) for d in large_N_runs]
    scaling = free_energy_scaling(comparisons)
    exponents = [scaling[K][0] for K in range(4)]
    for K, p in enumerate(exponents):
        assert abs(p - 2 * (K + 1)) < 0.5
    assert all(abs(b - a - 2) < 0.5 for a, b in zip(exponents, exponents[1:]))
    # N = 20 -> 40 against the K = 2 partial sum: 2^6 within a factor of 2
    ratio = comparisons[1].deviations[2] / comparisons[2].deviations[2]
    assert 32 < ratio < 128
