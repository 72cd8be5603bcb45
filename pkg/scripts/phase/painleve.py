#!/usr/bin/env python3
"""
Gel'fand-Dikii polynomials, the Painleve I hierarchy members they generate at
a critical point, and the formal large-x tail of the member solutions.

    d/dx U[k+1] = (r_c D^3 + 4 u D + 2 u_x) U[k],   U[0] = 1,

integrated with zero constant, so that U[1] = 2u and U[2] = 6u^2 + 2 r_c u_xx.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

import sympy as sp

from scripts.errors import InternalConsistencyError, NonExactIntegrandError, UsageError
from scripts.phase.critical import CriticalData

logger = logging.getLogger(__name__)

X = sp.Symbol('x')
Y = sp.Symbol('y')
RC = sp.Symbol('r_c')


def u_jet(i: int) -> sp.Symbol:
    """The i-th x-derivative of u: u, u_x, u_xx, ..."""
    return sp.Symbol('u' if i == 0 else 'u_' + 'x' * i)


def jets_for(weight: int) -> List[sp.Symbol]:
    return [u_jet(i) for i in range(max(weight - 1, 1))]


def total_derivative(expr: sp.Expr, order: int = 1) -> sp.Expr:
    """D_x acting on a polynomial in the u-jets."""
    for _ in range(order):
        jets = sorted((s for s in expr.free_symbols if s.name.startswith('u')),
                      key=lambda s: len(s.name))
        result = sp.Integer(0)
        for s in jets:
            i = 0 if s.name == 'u' else len(s.name) - 2
            result += sp.diff(expr, s) * u_jet(i + 1)
        expr = sp.expand(result)
    return expr


def _weighted_monomials(weight: int, smallest: int = 0) -> List[Tuple[int, ...]]:
    """Multisets of derivative orders i >= smallest with sum(2 + i) = weight."""
    if weight == 0:
        return [()]
    out = []
    for i in range(smallest, weight - 1):
        for rest in _weighted_monomials(weight - 2 - i, i):
            out.append((i,) + rest)
    return out


def integrate_x(rhs: sp.Expr, weight: int) -> sp.Expr:
    """
    The unique weight-`weight` differential polynomial P with D_x P = rhs.

    Solved by an ansatz over all monomials of that weight; a non-exact rhs
    leaves the linear system inconsistent.
    """
    monomials = _weighted_monomials(weight)
    unknowns = sp.symbols(f'c0:{len(monomials)}')
    ansatz = sum(c * sp.Mul(*[u_jet(i) for i in mono]) for c, mono in zip(unknowns, monomials))
    jets = jets_for(weight + 1)
    difference = sp.Poly(sp.expand(total_derivative(ansatz) - rhs), *jets)
    solution = sp.solve(difference.coeffs(), unknowns, dict=True)
    if not solution:
        raise NonExactIntegrandError(f"{rhs} is not an exact x-derivative")
    return sp.expand(ansatz.subs(solution[0]).subs({c: 0 for c in unknowns}))


@lru_cache(maxsize=None)
def _gelfand_dikii(kmax: int, rc: sp.Expr) -> Tuple[sp.Expr, ...]:
    u, ux = u_jet(0), u_jet(1)
    current = sp.Integer(1)
    out = []
    for k in range(kmax):
        rhs = sp.expand(rc * total_derivative(current, 3) + 4 * u * total_derivative(current)
                        + 2 * ux * current)
        current = integrate_x(rhs, 2 * (k + 1))
        logger.debug("  U[%d] = %s", k + 1, current)
        out.append(current)
    return tuple(out)


def gelfand_dikii(kmax: int, rc=RC) -> List[sp.Expr]:
    """[U[1], ..., U[kmax]] as polynomials in u, u_x, u_xx, ..."""
    if kmax < 1:
        raise UsageError("gelfand_dikii needs kmax >= 1")
    return list(_gelfand_dikii(kmax, sp.sympify(rc)))


@dataclass
class PainleveMember:
    """W_m U[m](u) = x - 2 r_c y."""
    m: int
    crit: CriticalData
    lhs: sp.Expr
    rhs: sp.Expr

    @property
    def hierarchy_alias(self) -> str:
        """Counting m = 2 as Painleve I itself, the m = 3 equation is the second member."""
        return f"member {self.m - 1} of the Painleve I hierarchy"

    def equation(self, y_value=None) -> sp.Eq:
        rhs = self.rhs if y_value is None else self.rhs.subs(Y, y_value)
        return sp.Eq(self.lhs, rhs)

    def normalized(self) -> sp.Eq:
        """Both sides scaled so that the highest u-derivative has coefficient 1."""
        top = u_jet(2 * self.m - 2)
        lead = sp.expand(self.lhs).coeff(top)
        if lead == 0:
            raise InternalConsistencyError(f"member m={self.m} lacks its top derivative {top}")
        return sp.Eq(sp.expand(self.lhs / lead), sp.expand(self.rhs / lead))

    def render(self, y_value=0) -> str:
        """Normalized equation as text, at y = y_value (None keeps y)."""
        eq = self.normalized()
        rhs = eq.rhs if y_value is None else eq.rhs.subs(Y, y_value)
        return f"{render_differential(eq.lhs)} = {render_differential(rhs)}"


def _jet_order(symbol: sp.Symbol) -> int:
    return 0 if symbol.name == 'u' else len(symbol.name) - 2


def _factor_text(symbol: sp.Symbol, power: int) -> str:
    if symbol.name.startswith('u'):
        base = 'u' + "'" * _jet_order(symbol)
        if power == 1:
            return base
        return f"{base}^{power}" if base == 'u' else f"({base})^{power}"
    return symbol.name if power == 1 else f"{symbol.name}^{power}"


def render_differential(expr: sp.Expr) -> str:
    """
    Plain-text form of a polynomial in the u-jets, x and y with primes for
    x-derivatives, highest derivative content first: u'''' + 10 u u'' + 5 (u')^2.
    """
    expr = sp.expand(expr)
    if expr == 0:
        return '0'
    jets = sorted((s for s in expr.free_symbols if s.name.startswith('u')), key=_jet_order)
    others = sorted((s for s in expr.free_symbols if not s.name.startswith('u')), key=lambda s: s.name)
    gens = jets + others
    if not gens:
        return str(expr)
    terms = []
    for monom, coeff in sp.Poly(expr, *gens).terms():
        orders = [_jet_order(g) * e for g, e in zip(jets, monom)]
        top = max([_jet_order(g) for g, e in zip(jets, monom) if e] or [0])
        key = (-sum(orders), -top, -sum(monom), [-e for e in monom])
        factors = [_factor_text(g, e) for g, e in zip(gens, monom) if e]
        terms.append((key, coeff, factors))
    terms.sort(key=lambda item: item[0])
    pieces = []
    for i, (_, coeff, factors) in enumerate(terms):
        magnitude = abs(coeff)
        body = ' '.join(factors)
        if magnitude != 1 or not factors:
            body = f"{magnitude} {body}".strip()
        if i == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return ' '.join(pieces)


def painleve_member(m: int, crit: CriticalData) -> PainleveMember:
    if m < 2:
        raise UsageError("m = 1 is algebraic; Painleve members need m >= 2")
    if crit.m != m:
        raise UsageError(f"critical point has order {crit.m}, member m={m} requested")
    U = gelfand_dikii(m, crit.rc)[m - 1]
    lhs = sp.expand(crit.W_m * U)
    rhs = X - 2 * crit.rc * Y
    logger.info("Painleve member m=%d: %s = %s", m, lhs, rhs)
    return PainleveMember(m, crit, lhs, rhs)


@dataclass
class FormalTailSeries:
    """u(x) = x^(1/m) sum_n a_n x^(-(2m+1) n / m), solved order by order at y = 0."""
    m: int
    coefficients: List[sp.Expr]
    residual_order: int
    residual_lead: sp.Expr = 0
    member: PainleveMember = field(default=None, repr=False)

    @property
    def terms(self) -> int:
        return len(self.coefficients)

    @property
    def step(self) -> sp.Rational:
        return sp.Rational(2 * self.m + 1, self.m)

    def expression(self, x=X) -> sp.Expr:
        return sum(a * x ** (sp.Rational(1, self.m) - n * self.step)
                   for n, a in enumerate(self.coefficients))

    def residual_exponent(self) -> sp.Rational:
        """x-exponent of the leading residual term of the equation."""
        return 1 - self.residual_order * self.step

    def matching_limit(self, y=Y) -> sp.Expr:
        """Leading behavior of u(-2 r_c y) as y -> +oo on the real branch."""
        if self.m % 2 == 0:
            raise UsageError("no real branch of x^(1/m) for negative x with m even")
        rc = self.member.crit.rc
        return self.coefficients[0] * sp.real_root(-2 * rc, self.m) * y ** sp.Rational(1, self.m)


def formal_tail_series(member: PainleveMember, terms: int) -> FormalTailSeries:
    """
    Order matching in v = x^(1/m) with u = v sum_n a_n v^(-(2m+1) n); the
    leading balance picks the real root a_0.
    """
    if terms < 1:
        raise UsageError("formal_tail_series needs terms >= 1")
    m = member.m
    v, w = sp.symbols('v w', positive=True)
    step = 2 * m + 1
    a = list(sp.symbols(f'a0:{terms}'))
    u_of_v = v * sum(a[n] * v ** (-step * n) for n in range(terms))
    derivs = [u_of_v]
    for i in range(1, 2 * m - 1):
        derivs.append(sp.expand(sp.diff(derivs[-1], v) / (m * v ** (m - 1))))
    lhs = member.lhs.subs({u_jet(i): derivs[i] for i in range(len(derivs))}, simultaneous=True)
    residual = sp.expand((lhs - v ** m) / v ** m)
    residual = sp.expand(residual.subs(v, w ** sp.Rational(-1, step)))
    poly = sp.Poly(residual, w)
    solved: Dict[sp.Symbol, sp.Expr] = {}
    for n in range(terms):
        condition = sp.expand(poly.coeff_monomial(w ** n).subs(solved))
        if n == 0:
            roots = [r for r in sp.solve(condition, a[0]) if r.is_real]
            if not roots:
                raise InternalConsistencyError("leading balance has no real solution")
            solved[a[0]] = max(roots) if m % 2 == 0 else roots[0]
            continue
        slope = sp.diff(condition, a[n])
        if slope == 0:
            raise InternalConsistencyError(f"order {n} of the tail series does not determine a_{n}")
        solved[a[n]] = sp.nsimplify(sp.solve(condition, a[n])[0])
    coefficients = [sp.nsimplify(solved[a[n]]) for n in range(terms)]
    remainder = sp.expand(poly.as_expr().subs(solved))
    order = terms
    lead = sp.Integer(0)
    for power in range(terms, terms * (2 * m + 2) + 1):
        lead = sp.nsimplify(remainder.coeff(w, power))
        if lead != 0:
            order = power
            break
    for n in range(terms):
        if sp.nsimplify(remainder.coeff(w, n)) != 0:
            raise InternalConsistencyError(f"tail series leaves a residual at order {n}")
    logger.info("Formal tail (m=%d): %s", m, coefficients)
    return FormalTailSeries(m, coefficients, order, lead, member)


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Gel'fand-Dikii polynomials")
    print("=" * 60)
    for k, U in enumerate(gelfand_dikii(3), start=1):
        print(f"  U[{k}] = {U}")
    crit = CriticalData(sp.Integer(1), 3, sp.Rational(1, 20))
    member = painleve_member(3, crit)
    print(f"\n  BMP member: {member.normalized()}")
    tail = formal_tail_series(member, 3)
    print(f"  tail coefficients: {tail.coefficients}")
    print(f"  u(-2y) ~ {tail.matching_limit()}")
