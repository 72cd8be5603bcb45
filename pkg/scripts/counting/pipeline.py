#!/usr/bin/env python3
"""
Taylor coefficients of F^(k) in the t-couplings.

1. Solve 2 t r0 + sum_n c_n t_2n r0^n = 1 for r0 as a series in the couplings
   with coefficients in s = 1/t.
2. Substitute r0, E = 1/D and W^(j)(r0) into the deformed f_k.
3. Integrate monomial-wise: int_1^oo (1 - t) t^-m dt = 1/(m-1) - 1/(m-2).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, List, Sequence, Tuple

import sympy as sp
from sympy import QQ

from scripts.algebra.jets import substitute
from scripts.algebra.series import CouplingSeries, series_arith
from scripts.counting.chart import TCouplingChart
from scripts.errors import (DivergentMonomialError, InternalConsistencyError,
                            TruncationError, UsageError)
from scripts.free_energy.integrand import FIntegrandSeries, assemble_f

logger = logging.getLogger(__name__)

Taylor = Dict[Tuple[int, ...], sp.Rational]


def _base(valences: Sequence[int], degree_cap: int, valence_cap: int = None) -> CouplingSeries:
    if degree_cap < 1:
        raise UsageError(f"degree cap must be >= 1, got {degree_cap}")
    return CouplingSeries(tuple(sorted(valences)), degree_cap, valence_cap=valence_cap)


def solve_r0_series(valences: Sequence[int], degree_cap: int,
                    valence_cap: int = None) -> CouplingSeries:
    """
    r0 = s/2 - (s/2) sum_n c_n t_2n r0^n by fixed-point iteration; each pass
    fixes one more total degree in the couplings.
    """
    base = _base(valences, degree_cap, valence_cap)
    chart = TCouplingChart(base.valences)
    half_s = base.monomial(QQ(1, 2), 1)
    r0 = half_s
    for _ in range(degree_cap):
        rhs = base.constant(0)
        for v in base.valences:
            rhs = rhs + base.gen(v) * r0 ** (v // 2) * chart.hodograph_coefficient(v)
        r0 = half_s - half_s * rhs
    logger.debug("  r0 series: %d terms", len(r0.element))
    return r0


def _e_series(r0: CouplingSeries) -> CouplingSeries:
    """E = 1/D = (s/2) / (1 + delta), delta = (s/2) sum_n n c_n t_2n r0^(n-1)."""
    chart = TCouplingChart(r0.valences)
    half_s = r0.monomial(QQ(1, 2), 1)
    total = r0.constant(0)
    for v in r0.valences:
        n = v // 2
        total = total + r0.gen(v) * r0 ** (n - 1) * (n * chart.hodograph_coefficient(v))
    delta = half_s * total
    geometric = [(-1) ** i for i in range(r0.cap + 1)]
    return half_s * series_arith(delta, geometric, 'compose_scalar')


def _w_series(r0: CouplingSeries, j: int) -> CouplingSeries:
    """W^(j)(r0) for j >= 2."""
    chart = TCouplingChart(r0.valences)
    total = r0.constant(0)
    for v in r0.valences:
        n = v // 2
        if n < j:
            continue
        scale = chart.hodograph_coefficient(v) * factorial(n) // factorial(n - j)
        total = total + r0.gen(v) * r0 ** (n - j) * scale
    return total


@lru_cache(maxsize=None)
def counting_integrands(half_degree: int, kmax: int) -> FIntegrandSeries:
    """Generic deformed f_0..f_kmax for a W of degree `half_degree`."""
    from scripts.expansion.recurrence import solve_deformed_rk
    rk = solve_deformed_rk(None, kmax, w_cap=max(half_degree, 1))
    return assemble_f(kmax, rk)


@dataclass
class JetImages:
    """Series images of the jet generators xi, E, s, W2, ..., Wp."""
    r0: CouplingSeries
    images: List[CouplingSeries]

    @classmethod
    def build(cls, r0: CouplingSeries, order: int) -> 'JetImages':
        images = [r0, _e_series(r0), r0.monomial(QQ(1), 1)]
        images += [_w_series(r0, j) for j in range(2, order + 1)]
        return cls(r0, images)


def f_series(k: int, r0s: CouplingSeries, degree_cap: int = None,
             integrands: FIntegrandSeries = None, images: JetImages = None) -> CouplingSeries:
    """
    f_k as a coupling series. f_0 already carries the -s^2/2 subtraction, so the
    coupling-free part vanishes for every k.
    """
    if degree_cap is not None and degree_cap > r0s.cap:
        raise TruncationError(f"r0 known to degree {r0s.cap}, f_{k} requested to {degree_cap}")
    half_degree = max(r0s.valences) // 2
    if integrands is None or integrands.kmax < k:
        integrands = counting_integrands(half_degree, k)
    fk = integrands[k]
    jet_ring = integrands.rk.jet_ring
    if images is None:
        images = JetImages.build(r0s, jet_ring.order)
    logger.info("Substituting series into f_%d (%d terms)...", k, len(fk.value))
    series = substitute(fk.value, images.images[:len(jet_ring.ring.gens)], r0s.constant(1))
    free = {m: c for m, c in series.coupling_free_part().items() if c}
    if free:
        raise InternalConsistencyError(f"f_{k} has a nonzero coupling-free part {free}")
    return series


def integrate_t(series: CouplingSeries) -> Taylor:
    """Monomial-wise int_1^oo (1 - t) t^-m dt; m <= 2 diverges."""
    taylor: Taylor = {}
    for m, c in series.element.items():
        exponents = tuple(m[1:])
        if not any(exponents):
            continue
        power = m[0]
        if power <= 2:
            raise DivergentMonomialError(f"t^-{power} at coupling exponents {exponents} diverges")
        value = QQ.to_sympy(c) * (sp.Rational(1, power - 1) - sp.Rational(1, power - 2))
        taylor[exponents] = taylor.get(exponents, sp.Integer(0)) + value
    return {n: v for n, v in taylor.items() if v != 0}


def free_energy_taylor(valences: Sequence[int], k: int, cap: int,
                       valence_cap: int = None) -> Taylor:
    """Taylor coefficients of F^(k)(t) through total coupling degree `cap`."""
    r0 = solve_r0_series(valences, cap, valence_cap)
    return integrate_t(f_series(k, r0))


def count_maps(valences: Sequence[int], max_vertices: int, genus_max: int):
    """
    kappa_k(n) for every n with each n_j <= max_vertices and k <= genus_max.
    """
    from scripts.counting.kappa import KappaTable, extract_kappa
    if max_vertices < 1 or genus_max < 0:
        raise UsageError("max_vertices must be >= 1 and genus_max >= 0")
    valences = tuple(sorted(set(valences)))
    cap = max_vertices * len(valences)
    logger.info("Counting maps: valences %s, n_j <= %d, k <= %d", valences, max_vertices, genus_max)
    r0 = solve_r0_series(valences, cap, valence_cap=max_vertices)
    integrands = counting_integrands(max(valences) // 2, genus_max)
    images = JetImages.build(r0, integrands.rk.jet_ring.order)
    table = KappaTable(valences, genus_max, max_vertices)
    for k in range(genus_max + 1):
        taylor = integrate_t(f_series(k, r0, integrands=integrands, images=images))
        table.update(extract_kappa(taylor, k, valences, max_vertices))
        logger.info("  kappa_%d: %d nonzero entries", k, len(taylor))
    return table


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Taylor coefficients of F^(k) in t-couplings (quartic)")
    print("=" * 60)
    r0 = solve_r0_series((2, 4), 2)
    print(f"  r0 = {r0.element.as_expr()}")
    for k in range(3):
        taylor = free_energy_taylor((2, 4), k, 3)
        print(f"  F^({k}): {dict(sorted(taylor.items()))}")
