#!/usr/bin/env python3
"""
Exact identities of the finite-N recurrence coefficients, used as numerical
residual checks: the discrete string equation

    V_z(L)_{n,n-1} = n / N,

and the quadratic and linear equations of the generating function
U_n = 1 + 2 sum_k (L^(2k-1))_{n,n-1} lambda^-k.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import mpmath as mp

from scripts.errors import BandOverflowError
from scripts.validation.jacobi import JacobiData

logger = logging.getLogger(__name__)


@dataclass
class ResidualReport:
    """Residuals keyed by n or by order; fitted exponents as (value, stderr)."""
    kind: str
    residuals: Dict = field(default_factory=dict)
    exponents: Dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def max_residual(self) -> mp.mpf:
        return max(self.residuals.values(), default=mp.mpf(0))

    def passes(self, tolerance) -> bool:
        return self.max_residual < tolerance


def _apply_L(v: List, r) -> List:
    """(L v)_i = v_{i+1} + r_i v_{i-1} on the truncated basis 0..n_max."""
    size = len(v)
    out = [mp.mpf(0)] * size
    for i in range(size):
        acc = v[i + 1] if i + 1 < size else mp.mpf(0)
        if i >= 1:
            acc += r[i] * v[i - 1]
        out[i] = acc
    return out


def power_entries(jd: JacobiData, column: int, max_power: int) -> List[List]:
    """Column `column` of L^j for j = 0..max_power."""
    v = [mp.mpf(0)] * (jd.n_max + 1)
    v[column] = mp.mpf(1)
    columns = [v]
    for _ in range(max_power):
        v = _apply_L(v, jd.r)
        columns.append(v)
    return columns


def _u_coefficients(jd: JacobiData, n: int, orders: int) -> List:
    """u_{n,0} = 1 and u_{n,k} = 2 (L^(2k-1))_{n,n-1} for k <= orders."""
    columns = power_entries(jd, n - 1, 2 * orders - 1)
    return [mp.mpf(1)] + [2 * columns[2 * k - 1][n] for k in range(1, orders + 1)]


def string_residual(jd: JacobiData, n_range: Optional[Tuple[int, int]] = None) -> ResidualReport:
    """|sum_k 2k g_2k (L^(2k-1))_{n,n-1} - n/N| for every n the band reaches."""
    pot = jd.potential
    p = pot.half_degree
    top = jd.n_max - (2 * p - 1)
    if top < 1:
        raise BandOverflowError(f"n_max = {jd.n_max} is too small for a degree-{2 * p} potential")
    lo, hi = n_range or (1, top)
    if hi > top:
        raise BandOverflowError(f"n = {hi} exceeds the band limit {top}")
    report = ResidualReport('string')
    with mp.workdps(jd.precision + 10):
        for n in range(lo, hi + 1):
            columns = power_entries(jd, n - 1, 2 * p - 1)
            total = mp.fsum(d * (mp.mpf(g.p) / g.q) * columns[d - 1][n]
                            for d, g in pot.couplings.items())
            report.residuals[n] = abs(total - mp.mpf(n) / jd.N)
    logger.info("String equation: max residual %s over n = %d..%d",
                mp.nstr(report.max_residual, 5), lo, hi)
    return report


def _mul(a: List, b: List, size: int) -> List:
    return [mp.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(size)]


def resolvent_identity_check(jd: JacobiData, orders: int) -> ResidualReport:
    """
    Both generating-function identities order by order in 1/lambda:

        r_n (U_n + U_{n-1})(U_n + U_{n+1}) = lambda (U_n^2 - 1),
        lambda (U_{n+1} - U_n) = r_{n+1} (U_{n+2} + U_{n+1}) - r_n (U_n + U_{n-1}).

    Residuals are keyed by ('quadratic' | 'linear', order).
    """
    depth = orders + 1
    top = jd.n_max - 2 - depth
    if top < 2:
        raise BandOverflowError(f"{orders} orders need n_max > {depth + 3}, have {jd.n_max}")
    report = ResidualReport('resolvent')
    with mp.workdps(jd.precision + 10):
        U = {n: _u_coefficients(jd, n, depth) for n in range(1, top + 3)}
        U[0] = [mp.mpf(1)] + [mp.mpf(0)] * depth
        for n in range(1, top + 1):
            r = jd.r
            square = _mul(U[n], U[n], depth + 1)
            left = _mul([a + b for a, b in zip(U[n], U[n - 1])],
                        [a + b for a, b in zip(U[n], U[n + 1])], depth + 1)
            for j in range(orders):
                quad = abs(r[n] * left[j] - square[j + 1])
                lin = abs((U[n + 1][j + 1] - U[n][j + 1])
                          - r[n + 1] * (U[n + 2][j] + U[n + 1][j])
                          + r[n] * (U[n][j] + U[n - 1][j]))
                for key, value in ((('quadratic', j), quad), (('linear', j), lin)):
                    report.residuals[key] = max(report.residuals.get(key, mp.mpf(0)), value)
    logger.info("Resolvent identities through order %d: max residual %s", orders,
                mp.nstr(report.max_residual, 5))
    return report


if __name__ == '__main__':
    from scripts.expansion.potential import load_potential
    from scripts.validation.jacobi import stieltjes_recurrence
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    jd = stieltjes_recurrence(load_potential('quartic'), 10, precision=30)
    print("=" * 60)
    print("Finite-N identities (quartic, N = 10)")
    print("=" * 60)
    print(f"  string equation: {mp.nstr(string_residual(jd).max_residual, 5)}")
    for key, value in sorted(resolvent_identity_check(jd, 3).residuals.items()):
        print(f"  {key}: {mp.nstr(value, 5)}")
