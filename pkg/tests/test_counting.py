"""Map counts from the Taylor expansion of F^(k) in the t-couplings."""

import pytest
import sympy as sp

from scripts.algebra.series import CouplingSeries
from scripts.counting.chart import chart_for
from scripts.counting.kappa import extract_kappa, load_reference_table
from scripts.counting.pipeline import (count_maps, free_energy_taylor, integrate_t,
                                       solve_r0_series)
from scripts.counting.wick import wick_oracle
from scripts.errors import DivergentMonomialError, KappaIntegrityError, UsageError

s = sp.Symbol('s')


@pytest.fixture(scope='module')
def quartic_table():
    return count_maps((2, 4), 4, 2)


@pytest.fixture(scope='module')
def quartic_reference():
    return load_reference_table('quartic')


def test_chart_maps_unit_gaussian_to_zero():
    chart = chart_for((4, 2))
    assert chart.valences == (2, 4)
    assert chart.to_g({4: sp.Rational(1, 12)}) == {2: 1, 4: sp.Rational(1, 3)}
    assert chart.to_t({2: 1, 4: sp.Rational(1, 3)}) == {2: 0, 4: sp.Rational(1, 12)}
    assert chart.hodograph_coefficient(4) == 48


@pytest.mark.parametrize('valences', [(), (3,), (2, 5)])
def test_bad_valences(valences):
    with pytest.raises(UsageError):
        chart_for(valences)


def test_r0_series_low_orders():
    r0 = solve_r0_series((2, 4), 2)
    assert r0.coefficient((0, 0)) == s / 2
    assert sp.expand(r0.coefficient((1, 0)) + s ** 2) == 0
    assert sp.expand(r0.coefficient((0, 1)) + 6 * s ** 3) == 0


@pytest.mark.parametrize('power, expected', [
    (3, sp.Rational(-1, 2)),
    (4, sp.Rational(-1, 6)),
    (5, sp.Rational(-1, 12)),
])
def test_integrate_t(power, expected):
    series = CouplingSeries((4,), 3).monomial(1, power, (1,))
    assert integrate_t(series) == {(1,): expected}


def test_integrate_t_skips_constants():
    series = CouplingSeries((4,), 3).monomial(5, 1)
    assert integrate_t(series) == {}


def test_integrate_t_divergence():
    series = CouplingSeries((4,), 3).monomial(1, 2, (1,))
    with pytest.raises(DivergentMonomialError):
        integrate_t(series)


def test_single_vertex_taylor_terms():
    assert free_energy_taylor((2, 4), 0, 2)[(0, 1)] == 2
    assert free_energy_taylor((2, 4), 1, 2)[(0, 1)] == 1
    assert free_energy_taylor((2, 4), 0, 2)[(1, 0)] == 1


def test_extract_kappa_sign_convention():
    rows = extract_kappa({(0, 1): sp.Integer(2), (2, 0): sp.Integer(-1)}, 0, (2, 4), 2)
    assert rows[(0, (0, 1))] == 2
    assert rows[(0, (2, 0))] == 2
    assert rows[(0, (0, 0))] == 0
    assert len(rows) == 9


@pytest.mark.parametrize('taylor', [
    {(1,): sp.Rational(1, 3)},
    {(1,): sp.Integer(-1)},
    {(0,): sp.Integer(1)},
])
def test_extract_kappa_integrity(taylor):
    with pytest.raises(KappaIntegrityError):
        extract_kappa(taylor, 1, (4,), 2)


def test_quartic_table_matches_reference(quartic_table, quartic_reference):
    assert len(quartic_table.entries) == 75
    assert quartic_table.compare(quartic_reference) == {}
    assert set(quartic_table.entries) == set(quartic_reference.entries)


@pytest.mark.parametrize('k, n, kappa', [
    (0, (0, 1), 2),
    (1, (0, 1), 1),
    (2, (0, 3), 1440),
    (1, (2, 2), 4800),
    (2, (4, 4), 97661583360),
])
def test_known_counts(quartic_table, k, n, kappa):
    assert quartic_table.get(k, n) == kappa


def test_frames(quartic_table):
    frame = quartic_table.to_frame()
    assert list(frame.columns) == ['n2', 'n4', 'k', 'kappa']
    assert len(frame) == 75
    assert frame.iloc[-1]['kappa'] == '97661583360'
    wide = quartic_table.wide_frame()
    assert list(wide.columns) == ['n2', 'n4', 'kappa0', 'kappa1', 'kappa2']
    assert len(wide) == 25


def test_count_maps_rejects_empty_caps():
    with pytest.raises(UsageError):
        count_maps((2, 4), 0, 1)


def test_missing_reference_table():
    with pytest.raises(UsageError):
        load_reference_table('octic')


@pytest.mark.parametrize('n', [(1, 0), (2, 0), (0, 2), (1, 1), (2, 1), (0, 3), (2, 2), (4, 1)])
def test_wick_oracle_agrees(quartic_reference, n):
    for (k, vector), value in wick_oracle(n, 2).items():
        assert quartic_reference.get(k, vector) == value


def test_wick_single_quartic_vertex():
    assert wick_oracle((0, 1), 1) == {(0, (0, 1)): 2, (1, (0, 1)): 1}


def test_wick_empty_vector():
    assert wick_oracle((0, 0), 1) == {(0, (0, 0)): 0, (1, (0, 0)): 0}


def test_wick_bound():
    with pytest.raises(UsageError):
        wick_oracle((0, 4), 2)


def test_wick_sixtic_against_reference():
    reference = load_reference_table('sixtic')
    for (k, vector), value in wick_oracle((1, 1, 1), 3).items():
        assert reference.get(k, vector) == value


@pytest.mark.slow
def test_sixtic_table():
    table = count_maps((2, 4, 6), 2, 3)
    reference = load_reference_table('sixtic')
    assert table.compare(reference) == {}
    assert table.get(3, (2, 2, 2)) == 95629248000


@pytest.mark.slow
def test_sixtic_genus_four():
    table = count_maps((2, 4, 6), 3, 4)
    reference = load_reference_table('sixtic_genus4')
    assert set(reference.entries) <= set(table.entries)
    assert table.compare(reference) == {}
    assert table.get(4, (3, 3, 3)) == 92591402036428800000
