#!/usr/bin/env python3
"""
The t-coupling chart: g_2 = 1 + 2 t_2 and g_2k = 2^k t_2k for k >= 2.

In these couplings the potential reads lambda/2 + sum_j t_2j lambda^j after
lambda -> lambda/2, so every t_2j is the weight of a 2j-valent vertex.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Sequence, Tuple

import sympy as sp

from scripts.errors import UsageError
from scripts.expansion.potential import Potential

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TCouplingChart:
    """Map between g-couplings and t-couplings for the even valences 2..2p."""
    valences: Tuple[int, ...]

    def __post_init__(self):
        if not self.valences:
            raise UsageError("the chart needs at least one valence")
        for v in self.valences:
            if v < 2 or v % 2:
                raise UsageError(f"valences must be even and >= 2, got {v}")
        object.__setattr__(self, 'valences', tuple(sorted(set(self.valences))))

    @property
    def half_degree(self) -> int:
        return max(self.valences) // 2

    def to_g(self, t: Dict[int, object]) -> Dict[int, sp.Expr]:
        """g-couplings keyed by even degree; t-couplings not in the chart are rejected."""
        unknown = set(t) - set(self.valences)
        if unknown:
            raise UsageError(f"t-couplings {sorted(unknown)} are outside valences {self.valences}")
        g = {2: sp.Integer(1)}
        for v, value in t.items():
            k = v // 2
            g[v] = g.get(v, sp.Integer(0)) + 2 ** k * sp.sympify(value)
        return g

    def to_t(self, g: Dict[int, object]) -> Dict[int, sp.Expr]:
        t = {}
        for v in self.valences:
            value = sp.sympify(g.get(v, 0))
            if v == 2:
                value -= 1
            t[v] = value / 2 ** (v // 2)
        return t

    def potential(self, t: Dict[int, object], name: str = 't-chart') -> Potential:
        return Potential(self.to_g(t), name)

    def hodograph_coefficient(self, valence: int) -> int:
        """c_n in W(xi) = 2 xi + sum_n c_n t_2n xi^n, n = valence / 2."""
        n = valence // 2
        return n * comb(2 * n, n) * 2 ** n


def chart_for(valences: Sequence[int]) -> TCouplingChart:
    return TCouplingChart(tuple(valences))


if __name__ == '__main__':
    chart = chart_for((2, 4, 6))
    print("=" * 60)
    print("t-coupling chart")
    print("=" * 60)
    print(f"  zero t-couplings -> g = {chart.to_g({})}")
    print(f"  t4 = 1/12 -> g = {chart.to_g({4: sp.Rational(1, 12)})}")
    for v in chart.valences:
        print(f"  c_{v // 2} = {chart.hodograph_coefficient(v)}")
