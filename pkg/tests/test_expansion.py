"""Potentials, W, hodograph roots, resolvent tables and the r_k expansion."""

import pytest
import sympy as sp

from scripts.algebra.jets import XI
from scripts.errors import NonUniqueRootError, PotentialFormatError, RootNotFoundError
from scripts.expansion.potential import (Potential, bleher_its_path, build_W, hodograph_root,
                                         load_potential, potential_from_dict, quartic_r0,
                                         w_derived)
from scripts.expansion.recurrence import (generic_r1_closed_form, generic_r2_closed_form,
                                          solve_deformed_rk, solve_rk)
from scripts.expansion.resolvent import derive_u_table

g2, g4 = sp.symbols('g2 g4')
W1, W2, W3 = sp.symbols('W1 W2 W3')
t = sp.Symbol('t')
r0_0, r0_1, r0_2, r1_0 = sp.symbols('r0_0 r0_1 r0_2 r1_0')


@pytest.fixture(scope='module')
def u_table():
    return derive_u_table(2)


@pytest.fixture(scope='module')
def generic_rk():
    return solve_rk(None, 2)


def test_quartic_W():
    W = build_W(Potential({2: g2, 4: g4}))
    assert sp.expand(W.expr - (2 * g2 * XI + 12 * g4 * XI ** 2)) == 0


@pytest.mark.parametrize('name, expected', [
    ('gaussian', 2 * XI),
    ('quartic', 2 * XI + 8 * XI ** 2),
    ('bmp60', XI ** 3 - 3 * XI ** 2 + 3 * XI),
])
def test_bundled_W(name, expected):
    assert sp.expand(build_W(load_potential(name)).expr - expected) == 0


def test_w_derived():
    bmp = build_W(load_potential('bmp60'))
    assert w_derived(bmp, 3).as_expr() == sp.Rational(1, 20)
    quartic = build_W(Potential({2: g2, 4: g4}))
    assert sp.expand(w_derived(quartic, 2).as_expr() - 2 * g4) == 0
    assert sp.expand(w_derived(quartic, 1).as_expr() - quartic.derivative(1).as_expr() / 2) == 0


@pytest.mark.parametrize('couplings', [
    {'3': '1'},
    {'2': '1/0'},
    {'2': '1', '4': '-1'},
    {'4': '0'},
])
def test_malformed_potentials(couplings):
    with pytest.raises(PotentialFormatError):
        potential_from_dict({'couplings': couplings})


def test_missing_potential_file(tmp_path):
    with pytest.raises(PotentialFormatError):
        load_potential(tmp_path / 'absent.json')


def test_json_potential_file(tmp_path):
    path = tmp_path / 'model.json'
    path.write_text('{"name": "m", "couplings": {"2": "3/2", "4": "-1/4", "6": "1/60"}}')
    pot = load_potential(path)
    assert pot.name == 'm'
    assert pot.couplings == {2: sp.Rational(3, 2), 4: sp.Rational(-1, 4), 6: sp.Rational(1, 60)}
    assert pot.half_degree == 3


@pytest.mark.parametrize('name, r0', [
    ('gaussian', sp.Rational(1, 2)),
    ('quartic', sp.Rational(1, 4)),
])
def test_exact_hodograph_roots(name, r0):
    root = hodograph_root(build_W(load_potential(name)), 1, 30)
    assert root.exact == r0
    assert not root.critical
    assert root.certified


def test_bmp_root_is_critical():
    root = hodograph_root(build_W(load_potential('bmp60')), 1, 30)
    assert root.exact == 1
    assert root.critical


def test_irrational_root_is_refined():
    root = hodograph_root(build_W(Potential({2: sp.Integer(1), 4: sp.Integer(1)})), 1, 40)
    assert root.exact is None
    assert abs(sp.Float(root.value, 40) - sp.N(quartic_r0(1, 1), 40)) < sp.Float("1e-35")


def test_several_positive_roots():
    W = build_W(Potential({2: sp.Rational(7, 4), 4: sp.Rational(-7, 24), 6: sp.Rational(1, 60)}))
    with pytest.raises(NonUniqueRootError) as info:
        hodograph_root(W, 1, 30)
    assert len(info.value.roots) == 3
    root = hodograph_root(W, 1, 30, allow_multiple=True)
    assert root.exact == sp.Rational(1, 2)
    assert not root.certified


def test_no_positive_root():
    W = build_W(Potential({2: sp.Integer(1)}))
    with pytest.raises(RootNotFoundError):
        hodograph_root(W, -1, 30)


def test_quartic_closed_root():
    assert quartic_r0(1, sp.Rational(2, 3)) == sp.Rational(1, 4)


def test_bleher_its_path():
    path = bleher_its_path(Potential({2: sp.Integer(1), 4: sp.Rational(2, 3)}), 2)
    assert path.coupling(2) == 1
    assert path.coupling(4) == sp.Rational(1, 6)
    gaussian_limit = bleher_its_path(Potential({2: sp.Integer(3)}), 3)
    assert gaussian_limit.coupling(2) == sp.Rational(5, 3)


def test_u_table_first_order(u_table):
    assert u_table.as_expr(1, 1) == 2 * r1_0
    assert u_table.as_expr(1, 2) == 2 * r0_0 * r0_2
    assert u_table.as_expr(1, 3) == 10 * r0_0 * r0_1 ** 2


def test_u_table_second_order_top_entry(u_table):
    assert u_table.as_expr(2, 6) == 2310 * r0_0 ** 2 * r0_1 ** 4
    assert u_table.max_j(2) == 6
    assert len(u_table.row(2)) == 6


def test_u_table_weights_and_degrees(u_table):
    engine = u_table.engine
    for (k, j), entry in u_table.entries.items():
        for monom in entry.itermonoms():
            assert engine.weight(monom) == 2 * k
            assert sum(monom[1:]) == j


def test_linear_identity_holds(u_table):
    assert not u_table.linear_identity_residual()


def test_generic_r1(generic_rk):
    assert sp.simplify(generic_rk[1].as_expr() - generic_r1_closed_form()) == 0


def test_generic_r2(generic_rk):
    assert sp.simplify(generic_rk[2].as_expr() - generic_r2_closed_form()) == 0


def test_gaussian_annihilation():
    rk = solve_rk(build_W(load_potential('gaussian')), 4, mode='concrete')
    assert all(c.is_zero() for c in rk.coefficients[1:])


def test_symbolic_quartic_r1():
    rk = solve_rk(build_W(Potential({2: g2, 4: g4})), 1, mode='concrete')
    expected = 96 * g4 ** 2 * XI / (2 * g2 + 24 * g4 * XI) ** 4
    assert sp.simplify(rk[1].as_expr() - expected) == 0


def test_deformed_coefficients():
    rk = solve_deformed_rk(None, 1)
    n1, n2, n3 = W1 / 2, W2 / 12, W3 / 120
    assert sp.simplify(rk.jet(0, 1).as_expr() - 1 / (2 * (t - 1 + n1))) == 0
    assert sp.simplify(rk.jet(0, 2).as_expr() + 3 * n2 / (2 * (t - 1 + n1) ** 3)) == 0
    expected = XI * (3 * n2 ** 2 / (2 * (t - 1 + n1) ** 4) - 5 * n3 / (4 * (t - 1 + n1) ** 3))
    assert sp.simplify(rk[1].as_expr() - expected) == 0
    assert sp.simplify(rk[1].as_expr().subs(t, 1) - generic_r1_closed_form()) == 0


def test_scaling_law_for_quartic_r1():
    # r_1(T, g) = T^-2 r_1(1, g / T) along the hodograph constraint
    c = sp.Rational(3)
    pot = load_potential('quartic')
    rk = solve_rk(build_W(pot), 1, mode='concrete')
    scaled = solve_rk(build_W(pot.scaled(c)), 1, mode='concrete')
    root_T = hodograph_root(build_W(pot), c, 30).exact
    root_1 = hodograph_root(build_W(pot.scaled(c)), 1, 30).exact
    assert root_T == root_1
    lhs = rk[1].as_ratfunc().evaluate({XI: root_T})
    rhs = scaled[1].as_ratfunc().evaluate({XI: root_1}) / c ** 2
    assert lhs == rhs
