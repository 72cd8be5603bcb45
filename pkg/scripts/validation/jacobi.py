#!/usr/bin/env python3
"""
Recurrence coefficients of the monic orthogonal polynomials for the weight
exp(-N V(x)) dx:

    x P_n = P_{n+1} + s_n P_n + r_n P_{n-1},   h_n = <P_n, P_n>,   r_n = h_n / h_{n-1}.

The potential is even, so s_n = 0.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import mpmath as mp

from scripts.config import QUADRATURE_GUARD_DIGITS, working_precision
from scripts.errors import PrecisionExhaustedError, UsageError
from scripts.expansion.potential import Potential
from scripts.validation.quadrature import WeightedRule, weighted_rule

logger = logging.getLogger(__name__)

START_LEVEL = 5
MAX_LEVEL = 12


@dataclass(frozen=True)
class JacobiData:
    potential: Potential
    N: int
    n_max: int
    r: Tuple[mp.mpf, ...]
    h: Tuple[mp.mpf, ...]
    s: Tuple[mp.mpf, ...]
    precision: int
    orthogonality: mp.mpf = mp.mpf(0)
    level: int = 0

    def r_at(self, n: int) -> mp.mpf:
        if n < 0 or n > self.n_max:
            raise UsageError(f"r_{n} is outside 0..{self.n_max}")
        return self.r[n]


def _stieltjes(rule: WeightedRule, n_max: int) -> Tuple[List, List, List]:
    """Run the three-term construction on one rule; returns r, h and the P_n values."""
    prev = [mp.mpf(0)] * len(rule.nodes)
    cur = [mp.mpf(1)] * len(rule.nodes)
    h = [rule.integrate([p * p for p in cur])]
    r = [mp.mpf(0)]
    values = [cur]
    for n in range(1, n_max + 1):
        nxt = [x * p - r[-1] * q for x, p, q in zip(rule.nodes, cur, prev)]
        prev, cur = cur, nxt
        h.append(rule.integrate([p * p for p in cur]))
        r.append(h[-1] / h[-2])
        values.append(cur)
    return r, h, values


def _orthogonality(rule: WeightedRule, values, h) -> mp.mpf:
    worst = mp.mpf(0)
    for k in range(len(values)):
        for l in range(k + 1, len(values)):
            inner = rule.integrate([a * b for a, b in zip(values[k], values[l])])
            worst = max(worst, abs(inner) / mp.sqrt(h[k] * h[l]))
    return worst


def stieltjes_recurrence(pot: Potential, N: int, n_max: int = None,
                         precision: int = None) -> JacobiData:
    """
    r_n and h_n for n <= n_max (default N + 2) by the Stieltjes procedure on a
    tanh-sinh rule, refined until two successive levels agree.
    """
    if not pot.is_numeric:
        raise UsageError("finite-N numerics need numeric couplings")
    if N < 1:
        raise UsageError(f"N must be >= 1, got {N}")
    precision = working_precision(precision)
    if precision < 30:
        raise UsageError("finite-N numerics need at least 30 digits")
    n_max = N + 2 if n_max is None else n_max
    tolerance = mp.mpf(10) ** (-(precision - 10))
    logger.info("Stieltjes recurrence for %s, N=%d, n_max=%d, %d digits...", pot.name, N, n_max, precision)
    with mp.workdps(precision + QUADRATURE_GUARD_DIGITS):
        previous = None
        for level in range(START_LEVEL, MAX_LEVEL + 1):
            rule = weighted_rule(pot, N, 2 * n_max + 2, level, precision)
            r, h, values = _stieltjes(rule, n_max)
            if previous is not None:
                change = max(abs(a - b) / abs(b) for a, b in zip(h, previous))
                logger.debug("  level %d: relative change %s", level, mp.nstr(change, 5))
                if change < tolerance:
                    break
            previous = h
        else:
            raise PrecisionExhaustedError(f"quadrature did not converge by level {MAX_LEVEL}")
        ortho = _orthogonality(rule, values, h)
        if ortho > tolerance:
            raise PrecisionExhaustedError(f"loss of orthogonality {mp.nstr(ortho, 5)}")
        zeros = tuple(mp.mpf(0) for _ in range(n_max + 1))
        logger.info("  converged at level %d, orthogonality %s", level, mp.nstr(ortho, 5))
        return JacobiData(pot, N, n_max, tuple(r), tuple(h), zeros, precision, ortho, level)


if __name__ == '__main__':
    from scripts.expansion.potential import load_potential
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Recurrence coefficients r_n,N")
    print("=" * 60)
    for name in ['gaussian', 'quartic']:
        jd = stieltjes_recurrence(load_potential(name), 10, precision=30)
        print(f"\n{name}:")
        for n in range(1, jd.n_max + 1):
            print(f"  r_{n} = {mp.nstr(jd.r[n], 20)}")
