#!/usr/bin/env python3
"""
Critical points of order m: W(r_c) = 1, W^(j)(r_c) = 0 for 1 <= j < m and
W^(m)(r_c) != 0.
"""

import logging
from dataclasses import dataclass
from math import factorial
from typing import Optional

import sympy as sp

from scripts.algebra.jets import XI, double_factorial, w_normalizer
from scripts.errors import NonUniqueRootError, PotentialFormatError, UsageError
from scripts.expansion.potential import WFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CriticalData:
    rc: sp.Expr
    m: int
    W_m: sp.Expr
    W: Optional[WFunction] = None

    def W_j(self, j: int) -> sp.Expr:
        """Normalized W_j(r_c); zero below m, symbolic above m when no W is attached."""
        if j < self.m:
            return sp.Integer(0)
        if j == self.m:
            return self.W_m
        if self.W is None:
            return sp.Symbol(f'W{j}')
        return sp.nsimplify(self.W.derivative(j).as_expr().subs(XI, self.rc) * w_normalizer(j))


def default_W_m(m: int) -> sp.Rational:
    """W_m(r_c) of W = 1 + (xi - r_c)^m, i.e. m! / (2^m (2m-1)!!)."""
    return sp.Rational(factorial(m), 2 ** m * double_factorial(2 * m - 1))


def _critical_factors(W: WFunction):
    P = W.poly - 1
    common = sp.gcd(P, W.derivative(1))
    if common.degree() < 1:
        return []
    found = []
    for factor, _ in common.factor_list()[1]:
        for root in factor.real_roots():
            if root > 0:
                found.append((factor, root))
    return found


def detect_criticality(W: WFunction) -> Optional[CriticalData]:
    """
    The positive critical point of W(r0) = 1 and its order, or None for a
    regular model. Vanishing of W^(j) at an irrational r_c is decided by
    divisibility by its minimal polynomial, so the result is exact.
    """
    if not W.is_numeric:
        raise PotentialFormatError("criticality detection needs numeric couplings")
    candidates = _critical_factors(W)
    if not candidates:
        logger.info("No critical point: W(r0) = 1 is regular")
        return None
    if len(candidates) > 1:
        raise NonUniqueRootError("several positive critical points", roots=[c[1] for c in candidates])
    factor, rc = candidates[0]
    m = 1
    while True:
        m += 1
        Wm = W.derivative(m)
        if Wm.is_zero:
            raise UsageError("W is constant beyond its critical point")
        if not sp.rem(Wm, factor).is_zero:
            break
    value = sp.nsimplify(Wm.as_expr().subs(XI, rc)) if factor.degree() == 1 else Wm.as_expr().subs(XI, rc)
    W_m = value * w_normalizer(m)
    logger.info("Critical point r_c = %s of order m = %d, W_m = %s", rc, m, W_m)
    return CriticalData(rc, m, W_m, W)


if __name__ == '__main__':
    from scripts.expansion.potential import build_W, load_potential
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Critical points")
    print("=" * 60)
    for name in ['gaussian', 'bmp60', 'sixtic_m2']:
        crit = detect_criticality(build_W(load_potential(name)))
        print(f"  {name}: {crit if crit is None else (crit.rc, crit.m, crit.W_m)}")
