"""Phase regions, critical points, the Painleve hierarchy and triple scaling."""

import pytest
import sympy as sp

from scripts.errors import OneCutAnsatzError, PhaseRegionError, UncertifiedPhaseError, UsageError
from scripts.expansion.potential import Potential, build_W, load_potential
from scripts.phase.critical import CriticalData, default_W_m, detect_criticality
from scripts.phase.painleve import (RC, X, Y, formal_tail_series, gelfand_dikii, painleve_member,
                                    render_differential, u_jet)
from scripts.phase.regions import (CRITICAL, CROSSES, ONE_CUT, SINGULAR_START, STAYS, TWO_CUT,
                                   LAMBDA, classify_quartic, deformed_cone_ratio,
                                   endpoint_solve_one_cut, h_polynomial, sixtic_endpoint_equation,
                                   sixtic_one_cut_check)
from scripts.phase.triple_scaling import diagonal_check, puiseux_matching, triple_scaling_system

u, ux, uxx = u_jet(0), u_jet(1), u_jet(2)


@pytest.fixture(scope='module')
def bmp_crit():
    return detect_criticality(build_W(load_potential('bmp60')))


@pytest.mark.parametrize('g2, g4, phase, fate, crossing', [
    (1, 1, ONE_CUT, STAYS, None),
    ('-1', '1', ONE_CUT, STAYS, None),
    (-2, 1, CRITICAL, STAYS, None),
    (-3, 1, TWO_CUT, CROSSES, 2),
])
def test_classify_quartic(g2, g4, phase, fate, crossing):
    verdict = classify_quartic(g2, g4)
    assert (verdict.phase, verdict.fate) == (phase, fate)
    assert verdict.crossing == crossing


def test_classify_quartic_needs_positive_g4():
    with pytest.raises(PhaseRegionError):
        classify_quartic(1, 0)


@pytest.mark.parametrize('g, phase, fate', [
    (('3/2', '-1/4', '1/60'), CRITICAL, SINGULAR_START),
    (('3', '-1/2', '1/30'), ONE_CUT, STAYS),
    (('2', '-1/4', '1/60'), ONE_CUT, STAYS),
    (('1', '1', '1'), ONE_CUT, STAYS),
])
def test_sixtic_one_cut_check(g, phase, fate):
    verdict = sixtic_one_cut_check(*g)
    assert (verdict.phase, verdict.fate) == (phase, fate)


@pytest.mark.parametrize('g', [('1', '1', '0'), ('-1', '1', '1'), ('0', '-1', '1')])
def test_sixtic_outside_regions(g):
    with pytest.raises(PhaseRegionError) as info:
        sixtic_one_cut_check(*g)
    assert not isinstance(info.value, UncertifiedPhaseError)


def test_sixtic_below_the_cone_is_uncertified():
    # cone ratio 2/3 inside g2 > 0, g4 < 0
    with pytest.raises(UncertifiedPhaseError) as info:
        sixtic_one_cut_check('1', '-1/4', '1/60')
    assert info.value.exit_code == PhaseRegionError.exit_code


def test_deformed_cone_ratio():
    T, t = sp.symbols('T t')
    ratio = deformed_cone_ratio({2: 90, 4: -15, 6: 1}, T, t)
    assert sp.simplify(ratio - (1 + T * (t - 1) / 90)) == 0


def test_sixtic_endpoint_equation_at_bmp():
    poly = sixtic_endpoint_equation(sp.Rational(3, 2), sp.Rational(-1, 4), sp.Rational(1, 60))
    A = poly.gens[0]
    assert sp.expand(poly.as_expr() - (A - 4) ** 3 / 4) == 0


def test_h_polynomial_bmp_double_zero():
    h = h_polynomial(load_potential('bmp60'), 1)
    assert sp.expand(h.as_expr() - (LAMBDA - 4) ** 2 / 10) == 0


def test_endpoint_bmp_is_singular():
    report = endpoint_solve_one_cut(load_potential('bmp60'), precision=30)
    assert report.singular
    assert not report.regular
    assert report.exact_root == 1
    assert report.min_sample >= 0


def test_endpoint_quartic_is_regular():
    report = endpoint_solve_one_cut(load_potential('quartic'), precision=30)
    assert report.regular
    assert report.exact_root == sp.Rational(1, 4)
    assert abs(float(report.alpha) - 1.0) < 1e-12
    assert report.min_sample > 0


def test_endpoint_two_cut_model():
    pot = Potential({2: sp.Integer(-3), 4: sp.Integer(1)})
    with pytest.raises(OneCutAnsatzError):
        endpoint_solve_one_cut(pot, precision=30)


def test_bmp_criticality(bmp_crit):
    assert (bmp_crit.rc, bmp_crit.m, bmp_crit.W_m) == (1, 3, sp.Rational(1, 20))
    assert bmp_crit.W_j(2) == 0
    assert bmp_crit.W_j(4) == 0


@pytest.mark.parametrize('name', ['gaussian', 'quartic', 'sixtic_positive'])
def test_regular_models(name):
    assert detect_criticality(build_W(load_potential(name))) is None


def test_order_two_critical_point():
    crit = detect_criticality(build_W(load_potential('sixtic_m2')))
    assert (crit.rc, crit.m, crit.W_m) == (1, 2, sp.Rational(1, 6))


@pytest.mark.parametrize('m, value', [(2, sp.Rational(1, 6)), (3, sp.Rational(1, 20))])
def test_default_W_m(m, value):
    assert default_W_m(m) == value


def test_gelfand_dikii_first_polynomials():
    U1, U2 = gelfand_dikii(2)
    assert U1 == 2 * u
    assert sp.expand(U2 - (6 * u ** 2 + 2 * RC * uxx)) == 0


def test_gelfand_dikii_needs_positive_order():
    with pytest.raises(UsageError):
        gelfand_dikii(0)


def test_bmp_member_rendering(bmp_crit):
    member = painleve_member(3, bmp_crit)
    assert member.render() == "u'''' + 10 u u'' + 5 (u')^2 + 10 u^3 = 10 x"
    assert member.hierarchy_alias == 'member 2 of the Painleve I hierarchy'


def test_painleve_one_rendering():
    member = painleve_member(2, CriticalData(sp.Integer(1), 2, default_W_m(2)))
    assert member.render() == "u'' + 3 u^2 = 3 x"
    assert member.render(None) == "u'' + 3 u^2 = 3 x - 6 y"


def test_render_signs():
    assert render_differential(-ux ** 2 + 2 * u) == "-(u')^2 + 2 u"
    assert render_differential(sp.Integer(0)) == '0'


@pytest.mark.parametrize('m', [1, 2])
def test_member_order_mismatch(bmp_crit, m):
    with pytest.raises(UsageError):
        painleve_member(m, bmp_crit)


def test_bmp_tail_series(bmp_crit):
    tail = formal_tail_series(painleve_member(3, bmp_crit), 2)
    assert tail.coefficients == [1, sp.Rational(1, 18)]
    assert tail.step == sp.Rational(7, 3)
    assert sp.simplify(tail.matching_limit() + sp.cbrt(2) * Y ** sp.Rational(1, 3)) == 0


def test_tail_needs_terms(bmp_crit):
    with pytest.raises(UsageError):
        formal_tail_series(painleve_member(3, bmp_crit), 0)


@pytest.mark.parametrize('terms', [1, 2, 3])
def test_tail_residual_starts_past_the_truncation(bmp_crit, terms):
    member = painleve_member(3, bmp_crit)
    tail = formal_tail_series(member, terms)
    eq = member.equation(0)
    u_of_x = tail.expression()
    jets = {u_jet(i): sp.diff(u_of_x, X, i) for i in range(2 * member.m - 1)}
    residual = sp.expand((eq.lhs - eq.rhs).subs(jets, simultaneous=True))
    leading = max(sp.Add.make_args(residual), key=lambda term: term.as_coeff_exponent(X)[1])
    coeff, power = leading.as_coeff_exponent(X)
    assert power == tail.residual_exponent() == 1 - terms * tail.step
    assert coeff == tail.residual_lead
    assert coeff != 0


@pytest.mark.parametrize('kmax', [1, 2])
def test_diagonal_matches_gelfand_dikii(kmax):
    assert all(residual == 0 for residual in diagonal_check(kmax, sp.Integer(1)))


def test_puiseux_matching_at_bmp(bmp_crit):
    report = puiseux_matching(bmp_crit)
    coeff, power = report.leading['r0 - r_c']
    assert power == 1
    assert sp.simplify(coeff + sp.cbrt(2)) == 0
    assert report.leading["r0''"][1] == -5
    assert report.leading['r1'][1] == -6
    assert report.matched


def test_puiseux_even_order_has_no_real_branch():
    crit = detect_criticality(build_W(load_potential('sixtic_m2')))
    with pytest.raises(PhaseRegionError):
        puiseux_matching(crit)


def test_triple_scaling_system(bmp_crit):
    system = triple_scaling_system(1, bmp_crit)
    assert len(system.equations) == 1
    equation = system.equations[0]
    assert equation.coeff(Y) == 2 * sp.Symbol('r1')
    assert system.puiseux.matched


def test_triple_scaling_needs_order():
    with pytest.raises(UsageError):
        triple_scaling_system(0, CriticalData(sp.Integer(1), 3, sp.Rational(1, 20)))


def test_triple_scaling_table_entry():
    from scripts.expansion.resolvent import triple_scaling_u_table
    u1_0, u2_0, u1_2, u2_2, u1_4, rc = sp.symbols('u1_0 u2_0 u1_2 u2_2 u1_4 rc')
    expected = 12 * u1_0 * u2_0 + 2 * u1_0 * u1_2 + 2 * rc * u2_2 + rc * u1_4 / 6
    assert sp.expand(triple_scaling_u_table(3).as_expr(3, 2) - expected) == 0
