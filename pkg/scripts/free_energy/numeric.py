#!/usr/bin/env python3
"""
High-precision values of F^(0)..F^(3) at the hodograph root, and an
independent quadrature of int_0^r0 R_k dxi.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Union

import mpmath as mp
import sympy as sp

from scripts.algebra.exact import RatFunc
from scripts.algebra.jets import XI
from scripts.config import working_precision
from scripts.errors import UnsupportedOrderError, UsageError
from scripts.expansion.potential import (HodographRoot, Potential, WFunction, build_W,
                                         hodograph_root)
from scripts.free_energy.closed_forms import MAX_GENUS, R0, closed_form_F
from scripts.free_energy.integrand import XiIntegrand

logger = logging.getLogger(__name__)


@dataclass
class FreeEnergyValues:
    """F^(k) for k = 0..kmax at T = 1."""
    potential: Potential
    root: HodographRoot
    values: Dict[int, mp.mpf] = field(default_factory=dict)
    precision: int = 50

    def partial_sum(self, N: int, K: int) -> mp.mpf:
        """sum_{k <= K} F^(k) N^(-2k)."""
        with mp.workdps(self.precision):
            return mp.fsum(self.values[k] * mp.mpf(N) ** (-2 * k) for k in range(K + 1))


def numeric_free_energy(pot: Potential, kmax: int = MAX_GENUS, precision: int = None,
                        allow_multiple: bool = False) -> FreeEnergyValues:
    """Evaluate the closed forms at the positive root of W(r0) = 1; log arguments must be positive."""
    if kmax > MAX_GENUS:
        raise UnsupportedOrderError(f"closed forms exist for k <= {MAX_GENUS}")
    precision = working_precision(precision)
    W = build_W(pot)
    root = hodograph_root(W, 1, precision, allow_multiple=allow_multiple)
    r0 = root.exact if root.exact is not None else root.value
    result = FreeEnergyValues(pot, root, precision=precision)
    for k in range(kmax + 1):
        form = closed_form_F(k, W, r0)
        result.values[k] = form.evaluate({R0: r0}, precision)
        logger.info("  F^(%d) = %s", k, mp.nstr(result.values[k], 20))
    return result


def integrate_xi(R: Union[XiIntegrand, RatFunc], W: WFunction, r0, precision: int = None) -> mp.mpf:
    """int_0^r0 R(xi) dxi by tanh-sinh quadrature."""
    precision = working_precision(precision)
    if isinstance(R, XiIntegrand):
        R = R.specialize(W)
    free = R.as_expr().free_symbols - {XI}
    if free:
        raise UsageError(f"numeric quadrature needs numeric couplings; integrand depends on {free}")
    fn = sp.lambdify(XI, R.as_expr(), 'mpmath')
    with mp.workdps(precision + 10):
        upper = mp.mpf(str(sp.N(r0, precision + 10))) if not isinstance(r0, mp.mpf) else r0
        value = mp.quad(fn, [0, upper], method='tanh-sinh')
    return value


if __name__ == '__main__':
    from scripts.expansion.potential import load_potential
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Genus expansion coefficients at T = 1")
    print("=" * 60)
    for name in ['gaussian', 'quartic', 'sixtic_positive']:
        values = numeric_free_energy(load_potential(name), precision=30)
        print(f"\n{name}: r0 = {mp.nstr(values.root.value, 20)}")
        for k, v in values.values.items():
            print(f"  F^({k}) = {mp.nstr(v, 20)}")
