"""Exact scalars, rational functions, truncated series and the T-derivation."""

import pytest
import sympy as sp

from scripts.algebra.exact import RatFunc, format_rational, parse_rational, poly_ratfunc_arith
from scripts.algebra.jets import XI, JetExpr, JetRing, double_factorial, w_normalizer
from scripts.algebra.series import CouplingSeries, EpsilonSeries, series_arith
from scripts.errors import ExactAlgebraError, PotentialFormatError, TruncationError

g2, g4 = sp.symbols('g2 g4')
W1, W2, W3 = sp.symbols('W1 W2 W3')
t = sp.Symbol('t')


@pytest.mark.parametrize('text, expected', [
    ('3/6', sp.Rational(1, 2)),
    ('-4/8', sp.Rational(-1, 2)),
    ('0.1', sp.Rational(1, 10)),
    (7, sp.Integer(7)),
    ('0', sp.Integer(0)),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize('text', ['1/0', 'abc', '', '1//2'])
def test_parse_rational_rejects_malformed(text):
    with pytest.raises(PotentialFormatError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(sp.Rational(-3, 4)) == '-3/4'
    assert format_rational(sp.Integer(4)) == '4'
    assert format_rational(sp.Rational(6, 8)) == '3/4'


def test_telescoping_sum():
    a = RatFunc.from_expr(XI / (XI + 1), [XI])
    b = RatFunc.from_expr(1 / (XI + 1), [XI])
    assert poly_ratfunc_arith(a, b, 'add').as_expr() == 1


def test_gcd_cancellation():
    a = RatFunc.from_expr((XI ** 2 - 1) / (XI - 1), [XI])
    assert a.as_expr() == XI + 1


def test_square_of_W_prime():
    a = RatFunc.from_expr(2 * g2 + 24 * g4 * XI)
    square = poly_ratfunc_arith(a, a, 'mul').as_expr()
    assert sp.expand(square - (4 * g2 ** 2 + 96 * g2 * g4 * XI + 576 * g4 ** 2 * XI ** 2)) == 0


def test_cross_multiplication_identity():
    a = RatFunc.from_expr((XI + 2) / (XI ** 2 + 1), [XI])
    b = RatFunc.from_expr((3 * XI - 1) / (XI + 5), [XI])
    lhs = (a + b).as_expr() * (XI ** 2 + 1) * (XI + 5)
    rhs = (XI + 2) * (XI + 5) + (3 * XI - 1) * (XI ** 2 + 1)
    assert sp.expand(sp.cancel(lhs) - rhs) == 0


def test_division_by_zero_ratfunc():
    a = RatFunc.from_expr(XI, [XI])
    zero = RatFunc.from_expr(0, [XI])
    with pytest.raises(ExactAlgebraError):
        poly_ratfunc_arith(a, zero, 'div')


def test_unknown_operation():
    a = RatFunc.from_expr(XI, [XI])
    with pytest.raises(ExactAlgebraError):
        poly_ratfunc_arith(a, a, 'pow')


def test_ratfunc_is_immutable():
    a = RatFunc.from_expr(XI, [XI])
    with pytest.raises(AttributeError):
        a.extra = 1


def test_epsilon_geometric_series():
    inverse = EpsilonSeries([sp.Integer(1), sp.Integer(1), sp.Integer(0), sp.Integer(0)]).invert()
    assert list(inverse.coefficients) == [1, -1, 1, -1]
    assert inverse.truncated


def test_epsilon_cauchy_product():
    r0, r1 = sp.symbols('r0 r1')
    r = EpsilonSeries([r0, r1], 1)
    square = series_arith(r, r, 'mul')
    assert square.coefficients[0] == r0 ** 2
    assert sp.expand(square.coefficients[1] - 2 * r0 * r1) == 0
    assert square.truncated


def test_epsilon_double_inversion():
    a = EpsilonSeries([sp.Integer(2), sp.Integer(3), sp.Rational(1, 2)])
    back = a.invert().invert()
    assert all(sp.simplify(x - y) == 0 for x, y in zip(back.coefficients, a.coefficients))


def test_epsilon_zero_constant_not_invertible():
    with pytest.raises(ExactAlgebraError):
        EpsilonSeries([sp.Integer(0), sp.Integer(1)]).invert()


def test_coupling_series_inversion():
    base = CouplingSeries((2,), 4)
    s = sp.Symbol('s')
    a = base.constant(2) + base.gen(2) * base.monomial(4, 1)
    inverse = series_arith(a, None, 'invert')
    for n in range(5):
        assert sp.expand(inverse.coefficient((n,)) - sp.Rational(1, 2) * (-2) ** n * s ** n) == 0
    assert (a * inverse - 1).is_zero()


def test_coupling_series_respects_cap():
    base = CouplingSeries((2, 4), 3)
    product = base.gen(2) * base.gen(4) * base.gen(4) * base.gen(2)
    assert product.is_zero()
    assert product.truncated
    assert (base.gen(2) * base.gen(4)).max_total_degree() == 2


def test_coupling_series_compose_exponential():
    base = CouplingSeries((2,), 3)
    exp = series_arith(base.gen(2), [1, 1, sp.Rational(1, 2), sp.Rational(1, 6)], 'compose_scalar')
    assert exp.coefficient((2,)) == sp.Rational(1, 2)
    assert exp.coefficient((3,)) == sp.Rational(1, 6)


def test_coupling_series_mismatched_caps():
    with pytest.raises(ExactAlgebraError):
        CouplingSeries((2,), 3).gen(2) + CouplingSeries((2,), 4).gen(2)


def test_w_normalizer():
    assert double_factorial(5) == 15
    assert w_normalizer(1) == sp.Rational(1, 2)
    assert w_normalizer(3) == sp.Rational(1, 120)


def test_undeformed_derivatives_of_r0():
    ring = JetRing(4)
    first = JetExpr.generic(ring.derive(ring.xi), ring)
    second = JetExpr.generic(ring.derive(ring.xi, 2), ring)
    assert first.as_expr() == 1 / W1
    assert sp.simplify(second.as_expr() + W2 / W1 ** 3) == 0


def test_deformed_first_derivative():
    ring = JetRing(4)
    first = JetExpr.generic(ring.derive(ring.xi), ring, deformed=True)
    assert sp.simplify(first.as_expr() - 1 / (2 * (t - 1) + W1)) == 0


def test_derivation_is_leibniz():
    ring = JetRing(6)
    a = ring.xi * ring.w(2) + ring.E ** 2
    b = ring.E * ring.xi ** 2 - ring.w(3)
    assert ring.derive(a * b) == ring.derive(a) * b + a * ring.derive(b)


def test_constants_have_zero_derivative():
    ring = JetRing(4)
    assert not ring.derive(ring.ring(sp.Rational(2, 3)))
    assert not ring.derive(ring.s)


def test_uncapped_top_derivative_truncates():
    ring = JetRing(3)
    with pytest.raises(TruncationError):
        ring.derive(ring.w(3))


def test_capped_ring_models_polynomial_W():
    ring = JetRing(0, w_cap=3)
    assert not ring.derive(ring.w(3))
    assert not ring.w(5)
