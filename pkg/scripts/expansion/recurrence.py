#!/usr/bin/env python3
"""
Expansion coefficients r_k of the recurrence coefficient and their Bleher-Its
deformed counterparts.

From sum_j W_j U_{k,j} = 0 (undeformed) or 2(t-1) r_k + sum_j W_j U_{k,j} = 0
(deformed), and U_{k,1} = 2 r_k, both cases reduce to

    r_k = -E * sum_{j>=2} W_j U_{k,j}(r_0, ..., r_{k-1}),   E = 1/D,

with D = W' or D = 2(t-1) + W'. The jet polynomials of the resolvent table
are evaluated on the T-derivatives of the already known r_j.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy as sp

from scripts.algebra.jets import ConcreteContext, JetExpr, JetRing, substitute
from scripts.errors import DegeneratePotentialError, UsageError
from scripts.expansion.potential import WFunction
from scripts.expansion.resolvent import derive_u_table

logger = logging.getLogger(__name__)


def jet_order_for(kmax: int) -> int:
    """Highest raw W-derivative the generic expansion to order kmax can touch."""
    return 3 * kmax + 2


class _JetValues:
    """Lazy map from resolvent-table generators to T-derivatives of the known r_j."""

    def __init__(self, jet_ring: JetRing, table, rs: List):
        self.jet_ring = jet_ring
        self.rs = rs
        self.cache: Dict[Tuple[int, int], object] = {}
        self.index = {idx: key for key, idx in table.engine._jet_index.items()}

    def derivative(self, j: int, i: int):
        key = (j, i)
        if key not in self.cache:
            if i == 0:
                self.cache[key] = self.rs[j]
            else:
                self.cache[key] = self.jet_ring.derive(self.derivative(j, i - 1))
        return self.cache[key]

    def __getitem__(self, gen_index: int):
        if gen_index not in self.index:
            raise UsageError("the resolvent spectral variable cannot be evaluated on jets")
        j, i = self.index[gen_index]
        if j >= len(self.rs):
            raise UsageError(f"r_{j} is not known yet")
        return self.derivative(j, i)


def generic_rk_polynomials(kmax: int, jet_ring: JetRing) -> Tuple[List, _JetValues]:
    """r_0 = xi, ..., r_kmax as polynomials of the jet ring."""
    rs = [jet_ring.xi]
    if kmax == 0:
        return rs, None
    table = derive_u_table(kmax)
    values = _JetValues(jet_ring, table, rs)
    for k in range(1, kmax + 1):
        B = jet_ring.ring.zero
        for j in range(2, 3 * k + 1):
            entry = table[(k, j)]
            if not entry:
                continue
            weight = jet_ring.w_normalized(j)
            if not weight:
                continue
            B += weight * substitute(entry, values, jet_ring.ring.one)
        rk = -jet_ring.E * B
        rs.append(rk)
        logger.info("  Solved r_%d (%d terms)", k, len(rk))
    return rs, values


@dataclass
class RkExpansion:
    """r_k (or deformed r_k) for k = 0..kmax with cached T-derivatives."""
    mode: str
    deformed: bool
    coefficients: List[JetExpr]
    jet_ring: JetRing
    context: Optional[ConcreteContext] = None
    W: Optional[WFunction] = None
    _derivatives: Dict[Tuple[int, int], JetExpr] = field(default_factory=dict, repr=False)

    @property
    def kmax(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> JetExpr:
        return self.coefficients[k]

    def jet(self, k: int, order: int = 0) -> JetExpr:
        """The T-derivative of order `order` of r_k."""
        key = (k, order)
        if key not in self._derivatives:
            if order == 0:
                self._derivatives[key] = self.coefficients[k]
            else:
                self._derivatives[key] = self.jet(k, order - 1).derive(1)
        return self._derivatives[key]

    def as_exprs(self) -> List[sp.Expr]:
        return [c.as_expr() for c in self.coefficients]


def _expand(W: Optional[WFunction], kmax: int, mode: str, deformed: bool,
            w_cap: Optional[int] = None) -> RkExpansion:
    if kmax < 0:
        raise UsageError("kmax must be >= 0")
    if mode not in ('generic', 'concrete'):
        raise UsageError(f"unknown mode {mode!r}")
    if mode == 'concrete':
        if W is None:
            raise UsageError("concrete mode needs a W function")
        if W.derivative(1).is_zero:
            raise DegeneratePotentialError("W' vanishes identically")
        jet_ring = JetRing(W.degree, w_cap=W.degree)
    else:
        jet_ring = JetRing(jet_order_for(kmax), w_cap=w_cap)
    label = 'deformed r' if deformed else 'r'
    logger.info("Computing %s_k to k=%d (%s mode)...", label, kmax, mode)
    polys, _ = generic_rk_polynomials(kmax, jet_ring)
    coefficients = [JetExpr.generic(p, jet_ring, deformed) for p in polys]
    context = None
    if mode == 'concrete':
        context = ConcreteContext(W.expr, deformed=deformed)
        coefficients = [c.specialize(context) for c in coefficients]
    return RkExpansion(mode, deformed, coefficients, jet_ring, context, W)


def solve_rk(W: Optional[WFunction], kmax: int, mode: str = 'generic',
             w_cap: Optional[int] = None) -> RkExpansion:
    """
    Coefficients r_k of r(eps, T, g) = sum r_k eps^(2k) as functions of r0 = xi,
    with W(xi) = T and dxi/dT = 1/W'.
    """
    return _expand(W, kmax, mode, deformed=False, w_cap=w_cap)


def solve_deformed_rk(W: Optional[WFunction], kmax: int, mode: str = 'generic',
                      w_cap: Optional[int] = None) -> RkExpansion:
    """
    Deformed coefficients with 2(t-1) xi + W(xi) = T and dxi/dT = 1/(2(t-1) + W').
    """
    return _expand(W, kmax, mode, deformed=True, w_cap=w_cap)


def generic_r1_closed_form(xi=None) -> sp.Expr:
    """r1 = r0 (2 W''^2 - W' W''') / (12 W'^4) in W-derivative notation."""
    xi = xi if xi is not None else sp.Symbol('xi')
    W1, W2, W3 = sp.symbols('W1 W2 W3')
    return xi * (2 * W2 ** 2 - W1 * W3) / (12 * W1 ** 4)


def generic_r2_closed_form(xi=None) -> sp.Expr:
    """r2 = r0 (X + r0 Y) / (1440 W'^9) with the standard X and Y blocks."""
    xi = xi if xi is not None else sp.Symbol('xi')
    W1, W2, W3, W4, W5, W6 = sp.symbols('W1 W2 W3 W4 W5 W6')
    X = (700 * W1 * W2 ** 4 - 910 * W1 ** 2 * W2 ** 2 * W3 + 118 * W1 ** 3 * W3 ** 2
         + 180 * W1 ** 3 * W2 * W4 - 18 * W1 ** 4 * W5)
    Y = (-980 * W2 ** 5 + 1760 * W1 * W2 ** 3 * W3 - 545 * W1 ** 2 * W2 * W3 ** 2
         - 420 * W1 ** 2 * W2 ** 2 * W4 + 102 * W1 ** 3 * W3 * W4
         + 64 * W1 ** 3 * W2 * W5 - 5 * W1 ** 4 * W6)
    return xi * (X + xi * Y) / (1440 * W1 ** 9)


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    rk = solve_rk(None, 2)
    print("=" * 60)
    print("Generic expansion coefficients (W1 = W', W2 = W'', ...)")
    print("=" * 60)
    for k, c in enumerate(rk.coefficients):
        print(f"  r_{k} = {sp.factor(c.as_expr())}")
