#!/usr/bin/env python3
"""
Phase regions of the quartic and sixtic families and the one-cut endpoint
check.

On the one-cut ansatz the density is h(lambda) sqrt(4 r0 - lambda) with

    h(lambda) = sum_n 2n g_2n sum_{m<n} binom(2m, m) r0^m lambda^(n-1-m),

and h(4 r0) = W'(r0). The model is regular when h > 0 on [0, 4 r0].
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Optional

import mpmath as mp
import numpy as np
import sympy as sp

from scripts.algebra.exact import parse_rational
from scripts.config import working_precision
from scripts.errors import OneCutAnsatzError, PhaseRegionError, UncertifiedPhaseError
from scripts.expansion.potential import Potential, bleher_its_path, build_W, hodograph_root

logger = logging.getLogger(__name__)

LAMBDA = sp.Symbol('lambda')
ENDPOINT = sp.Symbol('A')

ONE_CUT = 'one_cut_regular'
TWO_CUT = 'two_cut'
CRITICAL = 'critical_boundary'

STAYS = 'stays_one_cut'
CROSSES = 'crosses_at'
SINGULAR_START = 'singular_at_start'


@dataclass
class PhaseVerdict:
    phase: str
    fate: str
    crossing: Optional[sp.Expr] = None
    details: Dict = field(default_factory=dict)

    def summary(self) -> str:
        fate = f"{self.fate}({self.crossing})" if self.crossing is not None else self.fate
        return f"{self.phase}, {fate}"


def classify_quartic(g2, g4) -> PhaseVerdict:
    """
    G1 (one cut) for g2 > -2 sqrt(g4), G2 (two cuts) below, critical on the
    curve. The deformation from G2 crosses into G1 at t0 = 1 - g2 - 2 sqrt(g4).
    """
    g2, g4 = parse_rational(g2), parse_rational(g4)
    if g4 <= 0:
        raise PhaseRegionError(f"quartic classification needs g4 > 0, got {g4}")
    boundary = -2 * sp.sqrt(g4)
    details = {'boundary_g2': boundary}
    if g2 >= 0 or g2 > boundary:
        return PhaseVerdict(ONE_CUT, STAYS, details=details)
    if g2 == boundary:
        return PhaseVerdict(CRITICAL, STAYS, details=details)
    t0 = sp.nsimplify(1 - g2 - 2 * sp.sqrt(g4))
    details['t0_numeric'] = sp.N(t0, 20)
    return PhaseVerdict(TWO_CUT, CROSSES, crossing=t0, details=details)


def cone_ratio(g2, g4, g6) -> sp.Expr:
    """5 g2 g6 / (2 g4^2); the cone 2 g4^2 = 5 g2 g6 is ratio 1."""
    return sp.Rational(5, 2) * g2 * g6 / g4 ** 2


def deformed_cone_ratio(g, T=1, t=None) -> sp.Expr:
    """
    The cone ratio along the Bleher-Its path of the model g / T; for BMP
    (90, -15, 1) it is 1 + T (t - 1) / 90.
    """
    pot = g if isinstance(g, Potential) else Potential({d: parse_rational(v) for d, v in g.items()})
    t = sp.Symbol('t', positive=True) if t is None else sp.sympify(t)
    path = bleher_its_path(pot.scaled(T), t)
    ratio = cone_ratio(path.coupling(2), path.coupling(4), path.coupling(6))
    return sp.simplify(ratio)


def sixtic_one_cut_check(g2, g4, g6) -> PhaseVerdict:
    """
    One-cut verdict in the region g2 > 0, g4 < 0, g6 > 0 (open subset ratio > 1,
    singular on the cone only when 4 g4^3 = -225 g6^2) and in the all-positive
    region, where V is convex. Inside the first region with ratio < 1 the
    criterion is silent: UncertifiedPhaseError, not an out-of-region error.
    """
    g2, g4, g6 = (parse_rational(v) for v in (g2, g4, g6))
    if g6 <= 0:
        raise PhaseRegionError(f"sixtic check needs g6 > 0, got {g6}")
    if g2 >= 0 and g4 >= 0:
        return PhaseVerdict(ONE_CUT, STAYS, details={'certificate': 'convex potential'})
    if not (g2 > 0 and g4 < 0):
        raise PhaseRegionError(f"(g2, g4, g6) = ({g2}, {g4}, {g6}) is outside the supported regions")
    ratio = cone_ratio(g2, g4, g6)
    details = {'cone_ratio': ratio}
    if ratio > 1:
        return PhaseVerdict(ONE_CUT, STAYS, details=details)
    if ratio < 1:
        raise UncertifiedPhaseError(f"cone ratio {ratio} < 1: one-cut phase not certified")
    singular = 4 * g4 ** 3 == -225 * g6 ** 2
    details['singular_curve'] = singular
    if singular:
        return PhaseVerdict(CRITICAL, SINGULAR_START, details=details)
    return PhaseVerdict(ONE_CUT, STAYS, details=details)


def sixtic_endpoint_equation(g2, g4, g6) -> sp.Poly:
    """15 g6 A^3 + 12 g4 A^2 + 8 g2 A - 16, A = alpha^2 = 4 r0."""
    g2, g4, g6 = (sp.sympify(v) for v in (g2, g4, g6))
    return sp.Poly(15 * g6 * ENDPOINT ** 3 + 12 * g4 * ENDPOINT ** 2 + 8 * g2 * ENDPOINT - 16,
                   ENDPOINT)


def h_polynomial(pot: Potential, r0) -> sp.Poly:
    """h(lambda) for the one-cut density with endpoint 4 r0."""
    r0 = sp.sympify(r0)
    expr = sp.Integer(0)
    for d, g in pot.couplings.items():
        n = d // 2
        inner = sum(comb(2 * m, m) * r0 ** m * LAMBDA ** (n - 1 - m) for m in range(n))
        expr += 2 * n * g * inner
    return sp.Poly(sp.expand(expr), LAMBDA)


@dataclass
class EndpointReport:
    r0: mp.mpf
    alpha: mp.mpf
    h: sp.Poly
    regular: bool
    singular: bool
    h_at_endpoint: sp.Expr
    samples: np.ndarray = None
    exact_root: Optional[sp.Expr] = None

    @property
    def min_sample(self) -> float:
        return float(self.samples.min()) if self.samples is not None and len(self.samples) else float('nan')


def _rational_r0(root, precision: int) -> sp.Rational:
    if root.exact is not None:
        return root.exact
    with mp.workdps(precision + 10):
        return sp.Rational(mp.nstr(root.value, precision + 5))


def endpoint_solve_one_cut(pot: Potential, T=1, precision: int = None,
                           grid_points: int = 257) -> EndpointReport:
    """
    Solve W(r0) = 1 for g / T, set alpha = 2 sqrt(r0) and certify h > 0 on
    [0, 4 r0) by Sturm root counting; h(4 r0) = 0 marks a singular model.

    An irrational r0 is replaced by a rational approximation to the working
    precision before counting.
    """
    precision = working_precision(precision)
    model = pot.scaled(T) if parse_rational(T) != 1 else pot
    root = hodograph_root(build_W(model), 1, precision)
    r0 = _rational_r0(root, precision)
    h = h_polynomial(model, r0)
    endpoint = 4 * r0
    h_end = h.eval(endpoint)
    tolerance = sp.Rational(1, 10 ** (precision // 2))
    singular = bool(abs(h_end) < tolerance) if root.exact is None else bool(h_end == 0)
    if h.is_zero:
        raise OneCutAnsatzError("h vanishes identically")
    if singular and root.exact is not None:
        reduced = h
        while reduced.degree() > 0 and reduced.eval(endpoint) == 0:
            reduced = reduced.exquo(sp.Poly(LAMBDA - endpoint, LAMBDA))
        interior = reduced.count_roots(0, endpoint)
    elif singular:
        interior = h.count_roots(0, endpoint * (1 - tolerance))
    else:
        interior = h.count_roots(0, endpoint)
    grid = np.linspace(0.0, float(endpoint), grid_points)
    h_num = sp.lambdify(LAMBDA, h.as_expr(), 'numpy')
    samples = np.asarray(h_num(grid), dtype=float) * np.ones_like(grid)
    if interior > 0 or h.eval(0) < 0:
        raise OneCutAnsatzError(f"h changes sign on [0, {endpoint}]: the one-cut ansatz fails")
    logger.info("One-cut endpoint alpha = %s, h(4 r0) = %s", mp.nstr(root.alpha, 15), h_end)
    return EndpointReport(root.value, root.alpha, h, not singular, singular, h_end, samples,
                          root.exact)


if __name__ == '__main__':
    from scripts.expansion.potential import load_potential
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Phase regions")
    print("=" * 60)
    for g in [(1, 1), (-3, 1), (-2, 1)]:
        print(f"  quartic {g}: {classify_quartic(*g).summary()}")
    for T in (60, 30):
        g = [sp.Rational(v, T) for v in (90, -15, 1)]
        print(f"  BMP / {T}: {sixtic_one_cut_check(*g).summary()}")
    print(f"  deformed cone ratio (BMP): {deformed_cone_ratio({2: 90, 4: -15, 6: 1}, sp.Symbol('T'))}")
    for name in ['gaussian', 'quartic', 'bmp60']:
        report = endpoint_solve_one_cut(load_potential(name), precision=30)
        print(f"  {name}: alpha = {mp.nstr(report.alpha, 15)}, h = {report.h.as_expr()}, "
              f"singular = {report.singular}")
