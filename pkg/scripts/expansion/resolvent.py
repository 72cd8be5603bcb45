#!/usr/bin/env python3
"""
Resolvent coefficient tables U_{k,j} from the continuum quadratic identity

    r (U + U[-1]) (U + U[+1]) = lambda (U^2 - 1).

With eta = 1/(lambda - 4 r0) and U = U0 X, U0^2 = 1 + 4 r0 eta, the identity
divided by lambda U0^2 / eta reads

    eta r (X + Y-) (X + Y+) = (1 + 4 r0 eta) X^2 - 1,

where Y+- is the shifted X, including the factor (1 - 4 delta+- eta)^(-j-1/2)
produced by shifting r0 inside eta and U0. Every quantity is graded by the
weight w(d^i r_j / dT^i) = i + 2j, which plays the role of the power of epsilon,
so the weight-2k part of the identity determines X_k = sum_j U_{k,j} eta^j.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple

import sympy as sp
from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from scripts.errors import InternalConsistencyError

logger = logging.getLogger(__name__)


def _rising(a: sp.Rational, i: int) -> sp.Rational:
    out = sp.Integer(1)
    for n in range(i):
        out *= a + n
    return out


class ResolventEngine:
    """
    Weight-graded ring Q[eta, jets] with the T-derivation and Taylor shifts.

    The standard table uses jets r{j}_{i} = d^i r_j / dT^i, j = 0..kmax. With
    constant_lead the leading coefficient is a constant rc and the unknowns are
    u{k}_{i} = d^i r^[k] / dx^i for k >= 1 (triple-scaling table).
    """

    def __init__(self, kmax: int, constant_lead: bool = False):
        self.kmax = kmax
        self.cap = 2 * kmax
        self.constant_lead = constant_lead
        names = ['eta']
        weights = [0]
        self._jet_index: Dict[Tuple[int, int], int] = {}
        if constant_lead:
            names.append('rc')
            weights.append(0)
            prefix, first = 'u', 1
        else:
            prefix, first = 'r', 0
        for j in range(first, kmax + 1):
            for i in range(0, self.cap - 2 * j + 1):
                self._jet_index[(j, i)] = len(names)
                names.append(f'{prefix}{j}_{i}')
                weights.append(i + 2 * j)
        self.ring = PolyRing(names, QQ, grlex)
        self.weights = tuple(weights)
        self._next = {}
        for (j, i), idx in self._jet_index.items():
            self._next[idx] = self._jet_index.get((j, i + 1))
        self.eta = self.ring.gens[0]
        self.lead = self.ring.gens[1] if constant_lead else self.jet(0, 0)

    def jet(self, j: int, i: int = 0):
        """Generator for the i-th derivative of the j-th unknown."""
        return self.ring.gens[self._jet_index[(j, i)]]

    def jet_names(self) -> Dict[Tuple[int, int], str]:
        return {key: self.ring.symbols[idx].name for key, idx in self._jet_index.items()}

    def weight(self, monom) -> int:
        return sum(e * w for e, w in zip(monom, self.weights))

    def truncate(self, p, cap: int):
        return self.ring.from_dict({m: c for m, c in p.items() if self.weight(m) <= cap})

    def by_weight(self, p) -> Dict[int, object]:
        buckets: Dict[int, dict] = {}
        for m, c in p.items():
            buckets.setdefault(self.weight(m), {})[m] = c
        return {w: self.ring.from_dict(d) for w, d in buckets.items()}

    def mul(self, a, b, cap: int):
        """Product keeping only weights <= cap."""
        A, B = self.by_weight(a), self.by_weight(b)
        result = self.ring.zero
        for wa, pa in A.items():
            for wb, pb in B.items():
                if wa + wb <= cap:
                    result += pa * pb
        return result

    def derive(self, p):
        """d/dT (or d/dx); jets beyond the weight cap are dropped."""
        acc = {}
        for monom, coeff in p.items():
            for idx, nxt in self._next.items():
                e = monom[idx]
                if not e or nxt is None:
                    continue
                new = list(monom)
                new[idx] -= 1
                new[nxt] += 1
                key = tuple(new)
                acc[key] = acc.get(key, QQ.zero) + coeff * e
        return self.ring.from_dict({m: c for m, c in acc.items() if c})

    def shift(self, p, step: int, cap: int):
        """Taylor shift f(T + step*eps) = sum_l step^l D^l f / l!, truncated at cap."""
        result = self.truncate(p, cap)
        term = result
        for l in range(1, cap + 1):
            term = self.truncate(self.derive(term), cap)
            if not term:
                break
            result += term * sp.Rational(step ** l, factorial(l))
        return result

    def lead_shift_powers(self, step: int, cap: int) -> List:
        """Powers (4 delta eta)^i with delta = S(r0) - r0, up to the cap."""
        if self.constant_lead:
            return [self.ring.one]
        delta = self.shift(self.lead, step, cap) - self.lead
        z = delta * 4 * self.eta
        powers = [self.ring.one]
        for _ in range(cap):
            nxt = self.mul(powers[-1], z, cap)
            if not nxt:
                break
            powers.append(nxt)
        return powers

    @staticmethod
    def binomial(powers: List, j: int):
        """(1 - z)^(-j - 1/2) from the powers of z."""
        a = sp.Rational(2 * j + 1, 2)
        result = powers[0] * 0
        for i, zi in enumerate(powers):
            result += zi * (_rising(a, i) / factorial(i))
        return result

    def shifted_series(self, table: Dict[Tuple[int, int], object], step: int, cap: int,
                       kmax: int):
        """
        Y for the shift T -> T + step*eps: sum_k sum_j S(U_{k,j}) eta^j (1 - 4 delta eta)^(-j-1/2),
        including k = 0 (U_{0,0} = 1).
        """
        powers = self.lead_shift_powers(step, cap)
        binomials = {}
        result = self.binomial(powers, 0)
        for (k, j), entry in table.items():
            if k > kmax or 2 * k > cap:
                continue
            if j not in binomials:
                binomials[j] = self.binomial(powers, j)
            shifted = self.shift(entry, step, cap)
            result += self.mul(shifted * self.eta ** j, binomials[j], cap)
        return result

    def x_series(self, table, kmax: int):
        result = self.ring.one
        for (k, j), entry in table.items():
            if k <= kmax:
                result += entry * self.eta ** j
        return result

    def r_series(self, kmax: int, step: int = 0, cap: int = None):
        """The full coefficient r = lead + sum_k r_k, optionally shifted."""
        terms = self.lead
        first = 1
        for k in range(first, kmax + 1):
            terms += self.jet(k, 0)
        if step:
            return self.shift(terms, step, cap)
        return terms

    def quadratic_residual(self, table, kmax: int, cap: int):
        """eta r (X + Y-)(X + Y+) - (1 + 4 lead eta) X^2 + 1 with the given table."""
        X = self.x_series(table, kmax)
        Yminus = self.shifted_series(table, -1, cap, kmax)
        Yplus = self.shifted_series(table, 1, cap, kmax)
        r = self.r_series(min(self.kmax, cap // 2))
        lhs = self.mul(self.mul(X + Yminus, X + Yplus, cap), r * self.eta, cap)
        rhs = self.mul((1 + 4 * self.lead * self.eta) * X, X, cap) - 1
        return lhs - rhs

    def linear_residual(self, table, kmax: int, cap: int):
        """
        eta [S1(r)(Y2 + Y1) - r (X + Y-1)] - (1 + 4 lead eta)(Y1 - X): the linear
        consequence of the quadratic identity.
        """
        X = self.x_series(table, kmax)
        Y1 = self.shifted_series(table, 1, cap, kmax)
        Y2 = self.shifted_series(table, 2, cap, kmax)
        Ym = self.shifted_series(table, -1, cap, kmax)
        r = self.r_series(kmax)
        r1 = self.shift(r, 1, cap)
        left = self.mul(r1 * self.eta, Y2 + Y1, cap) - self.mul(r * self.eta, X + Ym, cap)
        right = self.mul(1 + 4 * self.lead * self.eta, Y1 - X, cap)
        return self.truncate(left - right, cap)

    def solve(self) -> Dict[Tuple[int, int], object]:
        """Generate U_{k,j} for 1 <= k <= kmax, checking every invariant on the way."""
        table: Dict[Tuple[int, int], object] = {}
        for k in range(1, self.kmax + 1):
            cap = 2 * k
            logger.info("Computing U-table order k=%d...", k)
            residual = self.quadratic_residual(table, k - 1, cap)
            parts = self.by_weight(residual)
            for w, part in parts.items():
                if w < cap and part:
                    raise InternalConsistencyError(
                        f"quadratic identity leaves a weight-{w} residual at order k={k}")
            Xk = parts.get(cap, self.ring.zero) * QQ(1, 2)
            entries = self._split_eta(Xk, k)
            table.update(entries)
            logger.info("  Solved U_%d,j for j <= %d (%d terms)", k, max(j for _, j in entries),
                        sum(len(e) for e in entries.values()))
        return table

    def _split_eta(self, Xk, k: int) -> Dict[Tuple[int, int], object]:
        by_power: Dict[int, dict] = {}
        for m, c in Xk.items():
            j = m[0]
            stripped = (0,) + tuple(m[1:])
            by_power.setdefault(j, {})[stripped] = c
        if 0 in by_power:
            raise InternalConsistencyError(f"U_{k} has an eta^0 term")
        entries = {}
        for j, terms in sorted(by_power.items()):
            if j > 3 * k:
                raise InternalConsistencyError(f"U_{k},{j} exceeds the eta-degree bound 3k")
            entry = self.ring.from_dict(terms)
            for m in entry.itermonoms():
                if sum(m[1:]) != j:
                    raise InternalConsistencyError(f"U_{k},{j} is not of degree {j} in the jets")
                if self.weight(m) != 2 * k:
                    raise InternalConsistencyError(f"U_{k},{j} is not of weight {2 * k}")
            entries[(k, j)] = entry
        lead_term = entries.get((k, 1))
        if lead_term != 2 * self.jet(k, 0):
            raise InternalConsistencyError(f"U_{k},1 differs from 2 r_{k}")
        return entries


@dataclass
class UCoeffTable:
    """U_{k,j} polynomials in the jets of one ResolventEngine."""
    kmax: int
    engine: ResolventEngine
    entries: Dict[Tuple[int, int], object] = field(default_factory=dict)

    def __getitem__(self, key: Tuple[int, int]):
        return self.entries.get(key, self.engine.ring.zero)

    def jet(self, j: int, i: int = 0):
        return self.engine.jet(j, i)

    @property
    def rc(self):
        if not self.engine.constant_lead:
            raise KeyError("rc exists only in the triple-scaling table")
        return self.engine.lead

    def row(self, k: int) -> Dict[int, object]:
        return {j: e for (kk, j), e in sorted(self.entries.items()) if kk == k}

    def max_j(self, k: int) -> int:
        return max((j for kk, j in self.entries if kk == k), default=0)

    def as_expr(self, k: int, j: int) -> sp.Expr:
        """Sympy rendering with r_j^(i) written as Derivative-free symbols r{j}_{i}."""
        return self[(k, j)].as_expr()

    def linear_identity_residual(self):
        """Residual of the linear consequence; zero through weight 2*kmax for a correct table."""
        return self.engine.linear_residual(self.entries, self.kmax, 2 * self.kmax)


@lru_cache(maxsize=None)
def derive_u_table(kmax: int) -> UCoeffTable:
    """U_{k,j}, 1 <= k <= kmax, 1 <= j <= 3k, from the quadratic resolvent identity."""
    if kmax < 1:
        raise ValueError("derive_u_table needs kmax >= 1")
    engine = ResolventEngine(kmax)
    return UCoeffTable(kmax, engine, engine.solve())


@lru_cache(maxsize=None)
def triple_scaling_u_table(kmax: int) -> UCoeffTable:
    """
    U^[k,j] of the triple-scaled resolvent: constant leading value rc, unknowns
    r^[k] of weight 2k, derivatives in x of weight 1.
    """
    if kmax < 1:
        raise ValueError("triple_scaling_u_table needs kmax >= 1")
    engine = ResolventEngine(kmax, constant_lead=True)
    return UCoeffTable(kmax, engine, engine.solve())


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    table = derive_u_table(2)
    print("=" * 60)
    print("Resolvent coefficients U_{k,j}")
    print("=" * 60)
    for (k, j), entry in sorted(table.entries.items()):
        print(f"  U_{k},{j} = {entry.as_expr()}")
