#!/usr/bin/env python3
"""
Finite-N data against the large-N expansions:

    r_{N,N} ~ sum_k r_k(1, g) N^(-2k),
    F_N - F_N^G ~ sum_k F^(k)(g) N^(-2k),

with F_N = -N^-2 ln N! - N^-1 (ln h_0 + sum_{n<N} (1 - n/N) ln r_n).
Decay exponents are fitted on log-log scale.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Union

import mpmath as mp
import numpy as np
import sympy as sp
from scipy.stats import linregress

from scripts.algebra.jets import XI
from scripts.errors import UsageError
from scripts.expansion.potential import build_W, hodograph_root
from scripts.expansion.recurrence import RkExpansion, solve_rk
from scripts.free_energy.closed_forms import MAX_GENUS
from scripts.free_energy.numeric import FreeEnergyValues, numeric_free_energy
from scripts.validation.identities import ResidualReport
from scripts.validation.jacobi import JacobiData

logger = logging.getLogger(__name__)


def _as_list(jd: Union[JacobiData, Sequence[JacobiData]]) -> List[JacobiData]:
    data = [jd] if isinstance(jd, JacobiData) else list(jd)
    if not data:
        raise UsageError("no finite-N data given")
    return sorted(data, key=lambda d: d.N)


def fit_exponent(Ns: Sequence[int], deltas: Sequence) -> tuple:
    """
    Decay exponent p of delta ~ C N^-p and its standard error; two points
    determine the line exactly, so the error is NaN below three.
    """
    fit = linregress(np.log(np.asarray(Ns, dtype=float)), np.log(np.asarray(deltas, dtype=float)))
    stderr = fit.stderr if len(Ns) >= 3 else np.nan
    return -fit.slope, stderr


def format_exponent(p: float, stderr: float) -> str:
    return f"{p:.3f} +- n/a" if np.isnan(stderr) else f"{p:.3f} +- {stderr:.3f}"


def rk_values(rk: RkExpansion, r0, precision: int) -> List[mp.mpf]:
    """r_k(1, g) for the concrete expansion at the hodograph root."""
    point = r0 if isinstance(r0, sp.Rational) else sp.Float(mp.nstr(r0, precision + 5), precision + 5)
    with mp.workdps(precision):
        return [mp.mpf(str(sp.N(c.as_ratfunc().evaluate({XI: point}), precision)))
                for c in rk.coefficients]


def asymptotic_compare(jd: Union[JacobiData, Sequence[JacobiData]], rk: RkExpansion = None,
                       K: int = 1) -> ResidualReport:
    """
    Delta_K(N) = |r_{N,N} - sum_{k<=K} r_k N^-2k| for every N given, with the
    decay exponent fitted per K' <= K (expected 2 (K' + 1)).
    """
    data = _as_list(jd)
    pot = data[0].potential
    precision = min(d.precision for d in data)
    if rk is None:
        rk = solve_rk(build_W(pot), K, mode='concrete')
    if rk.kmax < K:
        raise UsageError(f"r_k known to k={rk.kmax}, K={K} requested")
    root = hodograph_root(build_W(pot), 1, precision)
    values = rk_values(rk, root.exact if root.exact is not None else root.value, precision)
    floor = mp.mpf(10) ** (-(precision - 10))
    report = ResidualReport('asymptotic')
    with mp.workdps(precision):
        for order in range(K + 1):
            Ns, deltas = [], []
            for d in data:
                partial = mp.fsum(values[k] * mp.mpf(d.N) ** (-2 * k) for k in range(order + 1))
                delta = abs(d.r_at(d.N) - partial)
                report.residuals[(order, d.N)] = delta
                if delta > floor:
                    Ns.append(d.N)
                    deltas.append(delta)
                else:
                    report.notes.append(f"K={order}, N={d.N}: residual below the precision floor")
            if len(Ns) >= 2:
                report.exponents[order] = fit_exponent(Ns, deltas)
                logger.info("  K=%d: decay exponent %.3f", order, report.exponents[order][0])
    return report


def gaussian_free_energy(N: int, precision: int) -> mp.mpf:
    """F_N^G from h_0 = sqrt(pi/N) and r_n = n/(2N), summed through log-gamma."""
    with mp.workdps(precision + 10):
        N_ = mp.mpf(N)
        log_h0 = (mp.log(mp.pi) - mp.log(N_)) / 2
        log_fact = mp.loggamma(N_) if N > 1 else mp.mpf(0)
        n_log_n = mp.log(mp.hyperfac(N - 1)) if N > 1 else mp.mpf(0)
        sum_logs = (log_fact - n_log_n / N_) - mp.log(2 * N_) * (N_ - 1) / 2
        return -mp.loggamma(N_ + 1) / N_ ** 2 - (log_h0 + sum_logs) / N_


@dataclass
class FreeEnergyComparison:
    N: int
    F_N: mp.mpf
    F_gaussian: mp.mpf
    partial_sums: Dict[int, mp.mpf] = field(default_factory=dict)
    deviations: Dict[int, mp.mpf] = field(default_factory=dict)

    @property
    def difference(self) -> mp.mpf:
        return self.F_N - self.F_gaussian


def free_energy_biz(jd: JacobiData, values: FreeEnergyValues = None,
                    kmax: int = MAX_GENUS) -> FreeEnergyComparison:
    """F_N from the recurrence data minus F_N^G, against the genus partial sums."""
    N = jd.N
    if jd.n_max < N - 1 or not jd.h:
        raise UsageError("free energy needs h_0 and r_n for n < N")
    with mp.workdps(jd.precision + 10):
        total = mp.log(jd.h[0]) + mp.fsum((1 - mp.mpf(n) / N) * mp.log(jd.r[n]) for n in range(1, N))
        F_N = -mp.loggamma(N + 1) / mp.mpf(N) ** 2 - total / N
        result = FreeEnergyComparison(N, F_N, gaussian_free_energy(N, jd.precision))
        if values is None:
            values = numeric_free_energy(jd.potential, kmax, jd.precision)
        for K in range(kmax + 1):
            partial = values.partial_sum(N, K)
            result.partial_sums[K] = partial
            result.deviations[K] = abs(result.difference - partial)
    logger.info("F_N - F_N^G = %s at N=%d", mp.nstr(result.difference, 15), N)
    return result


def free_energy_scaling(comparisons: Sequence[FreeEnergyComparison]) -> Dict[int, tuple]:
    """Fitted decay exponent of the deviation from each partial sum."""
    comparisons = sorted(comparisons, key=lambda c: c.N)
    out = {}
    for K in comparisons[0].deviations:
        Ns = [c.N for c in comparisons]
        deltas = [c.deviations[K] for c in comparisons]
        if len(Ns) >= 2 and all(d > 0 for d in deltas):
            out[K] = fit_exponent(Ns, deltas)
    return out


if __name__ == '__main__':
    from scripts.expansion.potential import load_potential
    from scripts.validation.jacobi import stieltjes_recurrence
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    pot = load_potential('quartic')
    data = [stieltjes_recurrence(pot, N, precision=40) for N in (10, 20)]
    print("=" * 60)
    print("Finite-N against the large-N expansion (quartic)")
    print("=" * 60)
    report = asymptotic_compare(data, K=2)
    for K, (p, err) in report.exponents.items():
        print(f"  K={K}: exponent {format_exponent(p, err)}")
    for d in data:
        comparison = free_energy_biz(d)
        print(f"  N={d.N}: F_N - F_N^G = {mp.nstr(comparison.difference, 15)}, "
              f"deviation(K=2) = {mp.nstr(comparison.deviations[2], 5)}")
