#!/usr/bin/env python3
"""
Triple scaling at a critical point of order m: the inner equations

    2 y r[k] + sum_j W_j(r_c) U[m+k, j] = 0,   k = 1, 2, ...

for the coefficients r[k] of the scaled recurrence coefficient, and the
Puiseux data of the outer (t -> 1+) expansion they must match.
"""

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, List, Optional

import sympy as sp

from scripts.algebra.jets import XI, substitute
from scripts.config import PUISEUX_ORDER
from scripts.errors import InternalConsistencyError, PhaseRegionError, UsageError
from scripts.expansion.potential import WFunction
from scripts.expansion.resolvent import triple_scaling_u_table
from scripts.phase.critical import CriticalData
from scripts.phase.painleve import (Y, formal_tail_series, gelfand_dikii, painleve_member,
                                    u_jet)

logger = logging.getLogger(__name__)

TAU = sp.Symbol('tau', positive=True)


def _table_expr(entry, table, rc) -> sp.Expr:
    """Render a triple-scaling table entry with r_c substituted and r[k] jets as symbols."""
    names = table.engine.jet_names()
    mapping = {sp.Symbol(name): sp.Symbol(f'r{j}_' + 'x' * i if i else f'r{j}')
               for (j, i), name in names.items()}
    mapping[sp.Symbol('rc')] = rc
    return sp.expand(entry.as_expr().subs(mapping, simultaneous=True))


def diagonal_check(kmax: int, rc) -> List[sp.Expr]:
    """
    U[k, k] of the triple-scaling table at r[j] = 0 for j >= 2 minus the
    Gel'fand-Dikii U[k]; every entry must vanish.
    """
    table = triple_scaling_u_table(kmax)
    gd = gelfand_dikii(kmax, rc)
    residuals = []
    for k in range(1, kmax + 1):
        expr = _table_expr(table[(k, k)], table, rc)
        to_u = {}
        for (j, i), _ in table.engine.jet_names().items():
            sym = sp.Symbol(f'r{j}_' + 'x' * i if i else f'r{j}')
            to_u[sym] = u_jet(i) if j == 1 else 0
        residuals.append(sp.expand(expr.subs(to_u, simultaneous=True) - gd[k - 1]))
    return residuals


@dataclass
class PuiseuxReport:
    """Leading coefficients of the t -> 1+ expansions, in tau = (t - 1)^(1/m)."""
    m: int
    rc: sp.Expr
    r0_series: sp.Expr
    leading: Dict[str, tuple] = field(default_factory=dict)
    outer_f_slope: Optional[sp.Expr] = None
    inner_f_slope: Optional[sp.Expr] = None

    @property
    def matched(self) -> bool:
        if self.outer_f_slope is None or self.inner_f_slope is None:
            return False
        return sp.simplify(self.outer_f_slope - self.inner_f_slope) == 0


def _leading(expr: sp.Expr) -> tuple:
    """(coefficient, exponent in t - 1) of the leading tau term."""
    term = sp.expand(expr).as_leading_term(TAU)
    coeff, power = term.as_coeff_exponent(TAU)
    return sp.nsimplify(sp.simplify(coeff)), power


def puiseux_matching(crit: CriticalData, W: WFunction = None, order: int = PUISEUX_ORDER) -> PuiseuxReport:
    """
    Solve 2 (t - 1) r0 + W(r0) = 1 as r0 = r_c + tau d(tau), tau^m = t - 1, and
    read off the leading behavior of r0 - r_c, r0'' and r_1.
    """
    W = W or crit.W
    if W is None:
        raise UsageError("Puiseux matching needs the W polynomial")
    m, rc = crit.m, crit.rc
    c = [sp.nsimplify(W.derivative(j).as_expr().subs(XI, rc)) / factorial(j)
         for j in range(W.degree + 1)]
    base = -2 * rc / c[m]
    if m % 2 == 0 and base < 0:
        raise PhaseRegionError("no real Puiseux branch at this critical point")
    d = [sp.real_root(base, m) if m % 2 else -sp.root(base, m)]
    ds = sp.symbols(f'd1:{order + 1}')
    delta = TAU * (d[0] + sum(ds[i] * TAU ** (i + 1) for i in range(order)))
    equation = sp.expand(2 * TAU ** m * (rc + delta) + sum(c[j] * delta ** j
                                                            for j in range(m, W.degree + 1)))
    solved = {}
    for i in range(order):
        condition = sp.expand(equation.coeff(TAU, m + i + 1).subs(solved))
        value = sp.solve(condition, ds[i])
        if not value:
            raise InternalConsistencyError(f"Puiseux order {i + 1} is not determined")
        solved[ds[i]] = sp.simplify(value[0])
    r0 = sp.expand(rc + delta.subs(solved))
    report = PuiseuxReport(m, rc, r0)
    report.leading['r0 - r_c'] = _leading(r0 - rc)

    from scripts.expansion.recurrence import solve_deformed_rk
    rk = solve_deformed_rk(None, 1, w_cap=W.degree)
    jet_ring = rk.jet_ring
    E = 1 / (2 * TAU ** m + W.derivative(1).as_expr().subs(XI, r0))
    images = [r0, E, 1 / (1 + TAU ** m)]
    images += [W.derivative(j).as_expr().subs(XI, r0) for j in range(2, jet_ring.order + 1)]
    second = jet_ring.derive(jet_ring.xi, 2)
    report.leading["r0''"] = _leading(substitute(second, images, sp.Integer(1)))
    report.leading['r1'] = _leading(substitute(rk.coefficients[1].value, images, sp.Integer(1)))

    coeff, _ = report.leading['r0 - r_c']
    report.outer_f_slope = sp.simplify(4 * rc * coeff)
    if m % 2:
        tail = formal_tail_series(painleve_member(m, crit), 1)
        report.inner_f_slope = sp.simplify(4 * rc * tail.matching_limit().subs(Y, 1))
    for key, (coeff, power) in report.leading.items():
        logger.info("  %s ~ %s (t-1)^(%s)", key, coeff, power / m)
    return report


@dataclass
class TripleScalingSystem:
    crit: CriticalData
    equations: List[sp.Expr]
    puiseux: Optional[PuiseuxReport] = None


def triple_scaling_system(kmax: int, crit: CriticalData, W: WFunction = None) -> TripleScalingSystem:
    """
    The inner equations for k = 1..kmax (generated, not solved), after checking
    the diagonal of the table against the Gel'fand-Dikii polynomials.
    """
    if kmax < 1:
        raise UsageError("triple_scaling_system needs kmax >= 1")
    m, rc = crit.m, crit.rc
    for k, residual in enumerate(diagonal_check(m, rc), start=1):
        if residual != 0:
            raise InternalConsistencyError(f"U[{k},{k}] differs from the Gel'fand-Dikii polynomial")
    table = triple_scaling_u_table(m + kmax)
    equations = []
    for k in range(1, kmax + 1):
        expr = 2 * Y * sp.Symbol(f'r{k}')
        for j, entry in table.row(m + k).items():
            weight = crit.W_j(j)
            if weight != 0:
                expr += weight * _table_expr(entry, table, rc)
        equations.append(sp.expand(expr))
        logger.info("  inner equation k=%d: %d terms", k, len(sp.Add.make_args(equations[-1])))
    puiseux = None
    if (W or crit.W) is not None:
        puiseux = puiseux_matching(crit, W)
    return TripleScalingSystem(crit, equations, puiseux)


if __name__ == '__main__':
    from scripts.expansion.potential import build_W, load_potential
    from scripts.phase.critical import detect_criticality
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    crit = detect_criticality(build_W(load_potential('bmp60')))
    system = triple_scaling_system(1, crit)
    print("=" * 60)
    print("Triple scaling at the BMP critical point")
    print("=" * 60)
    for k, eq in enumerate(system.equations, start=1):
        print(f"  k={k}: {eq} = 0")
    for key, (coeff, power) in system.puiseux.leading.items():
        print(f"  {key} ~ {coeff} (t-1)^({power}/{crit.m})")
    print(f"  matched: {system.puiseux.matched}")
