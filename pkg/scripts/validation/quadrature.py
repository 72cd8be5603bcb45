#!/usr/bin/env python3
"""
Tanh-sinh quadrature for the weight exp(-N V(x)) on a truncated interval
[-R, R], with R chosen so the discarded tail is below the working precision.
"""

import logging
from dataclasses import dataclass
from typing import List

import mpmath as mp
from mpmath.calculus.quadrature import TanhSinh

from scripts.config import QUADRATURE_GUARD_DIGITS
from scripts.errors import PrecisionExhaustedError
from scripts.expansion.potential import Potential

logger = logging.getLogger(__name__)

MAX_RADIUS = 1000

_TANH_SINH = TanhSinh(mp.mp)


def potential_value(pot: Potential, x) -> mp.mpf:
    """V(x) = sum g_2k x^(2k)."""
    x2 = x * x
    return mp.fsum(mp.mpf(g.p) / g.q * x2 ** (d // 2) for d, g in pot.couplings.items())


def cutoff_radius(pot: Potential, N: int, degree: int, digits: int) -> mp.mpf:
    """
    Smallest R on a geometric grid with exp(-N V(R)) (2R + 2)^degree below
    10^-digits; V must grow beyond R.
    """
    target = digits * mp.log(10)
    R = mp.mpf(1)
    while R < MAX_RADIUS:
        if N * potential_value(pot, R) - degree * mp.log(2 * R + 2) >= target:
            slope = potential_value(pot, R * mp.mpf('1.01')) - potential_value(pot, R)
            if slope > 0:
                return R
        R *= mp.mpf('1.25')
    raise PrecisionExhaustedError(f"tail bound 10^-{digits} needs a cutoff beyond {MAX_RADIUS}")


def tanh_sinh_nodes(R, level: int, digits: int):
    """
    Nodes and weights of the tanh-sinh rule with step 2^-level on [-R, R].

    mpmath hands out only the abscissae new at each degree, with weights
    that omit the step; degrees 1..level together form the full rule.
    """
    with mp.workdps(digits):
        prec = mp.mp.prec
        h = mp.ldexp(1, -level)
        nodes: List[mp.mpf] = []
        weights: List[mp.mpf] = []
        for degree in range(1, level + 1):
            for x, w in _TANH_SINH.get_nodes(-R, R, degree, prec):
                nodes.append(x)
                weights.append(w * h)
    return nodes, weights


@dataclass
class WeightedRule:
    """Quadrature rule already multiplied by the weight exp(-N V)."""
    nodes: List[mp.mpf]
    weights: List[mp.mpf]
    radius: mp.mpf
    level: int

    def integrate(self, values) -> mp.mpf:
        return mp.fdot(self.weights, values)


def weighted_rule(pot: Potential, N: int, degree: int, level: int, precision: int) -> WeightedRule:
    digits = precision + QUADRATURE_GUARD_DIGITS
    R = cutoff_radius(pot, N, degree, digits)
    nodes, weights = tanh_sinh_nodes(R, level, digits)
    weighted = [w * mp.exp(-N * potential_value(pot, x)) for x, w in zip(nodes, weights)]
    logger.debug("  tanh-sinh level %d: %d nodes on [-%s, %s]", level, len(nodes),
                 mp.nstr(R, 6), mp.nstr(R, 6))
    return WeightedRule(nodes, weighted, R, level)


if __name__ == '__main__':
    from scripts.expansion.potential import load_potential
    print("=" * 60)
    print("Tanh-sinh rule for the Gaussian weight")
    print("=" * 60)
    with mp.workdps(40):
        rule = weighted_rule(load_potential('gaussian'), 10, 20, 7, 30)
        total = rule.integrate([1] * len(rule.nodes))
        print(f"  R = {mp.nstr(rule.radius, 8)}, nodes = {len(rule.nodes)}")
        print(f"  h0 = {mp.nstr(total, 30)}")
        print(f"  sqrt(pi/N) = {mp.nstr(mp.sqrt(mp.pi / 10), 30)}")
