#!/usr/bin/env python3
"""
Truncated series used by the expansion and counting stages.

EpsilonSeries holds coefficients of a series in epsilon^2 (JetExpr objects or
plain sympy numbers). CouplingSeries holds a multivariate series in the
t-couplings whose coefficients are Laurent polynomials in s = 1/t, stored as a
sparse sympy ring element over QQ with s as the first generator.
"""

import logging
from math import factorial
from typing import Callable, Iterable, Sequence

import sympy as sp
from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from scripts.errors import ExactAlgebraError, TruncationError

logger = logging.getLogger(__name__)


def _is_zero(c) -> bool:
    is_zero = getattr(c, 'is_zero', None)
    if callable(is_zero):
        return is_zero()
    return c == 0


def _inverse(c):
    if hasattr(c, 'inverse'):
        return c.inverse()
    if c == 0:
        raise ExactAlgebraError("series constant term is not invertible")
    return sp.Integer(1) / c


def _zero_like(c):
    if hasattr(c, 'zero_like'):
        return c.zero_like()
    return sp.Integer(0)


class EpsilonSeries:
    """
    Series sum_k c_k eps^(2k) truncated after k = kmax.

    `truncated` records whether an operation discarded a nonzero contribution
    above kmax, so a capped result is never mistaken for an exact one.
    """

    __slots__ = ('coefficients', 'kmax', 'truncated')

    def __init__(self, coefficients: Sequence, kmax: int = None, truncated: bool = False):
        coefficients = list(coefficients)
        if not coefficients:
            raise ExactAlgebraError("an EpsilonSeries needs at least one coefficient")
        if kmax is None:
            kmax = len(coefficients) - 1
        if len(coefficients) > kmax + 1:
            if any(not _is_zero(c) for c in coefficients[kmax + 1:]):
                truncated = True
            coefficients = coefficients[:kmax + 1]
        zero = _zero_like(coefficients[0])
        coefficients += [zero] * (kmax + 1 - len(coefficients))
        self.coefficients = tuple(coefficients)
        self.kmax = kmax
        self.truncated = truncated

    def __len__(self):
        return self.kmax + 1

    def __getitem__(self, k: int):
        if k > self.kmax:
            raise TruncationError(f"order {k} requested from a series capped at {self.kmax}")
        return self.coefficients[k]

    def __iter__(self):
        return iter(self.coefficients)

    def _check(self, other: 'EpsilonSeries'):
        if not isinstance(other, EpsilonSeries):
            raise ExactAlgebraError("EpsilonSeries arithmetic needs two EpsilonSeries")
        if other.kmax != self.kmax:
            raise ExactAlgebraError(f"mismatched truncation caps {self.kmax} and {other.kmax}")

    def __add__(self, other):
        self._check(other)
        coeffs = [a + b for a, b in zip(self.coefficients, other.coefficients)]
        return EpsilonSeries(coeffs, self.kmax, self.truncated or other.truncated)

    def __sub__(self, other):
        self._check(other)
        coeffs = [a - b for a, b in zip(self.coefficients, other.coefficients)]
        return EpsilonSeries(coeffs, self.kmax, self.truncated or other.truncated)

    def __neg__(self):
        return EpsilonSeries([-c for c in self.coefficients], self.kmax, self.truncated)

    def scale(self, factor) -> 'EpsilonSeries':
        return EpsilonSeries([c * factor for c in self.coefficients], self.kmax, self.truncated)

    def __mul__(self, other):
        if not isinstance(other, EpsilonSeries):
            return self.scale(other)
        self._check(other)
        a, b = self.coefficients, other.coefficients
        coeffs = []
        for n in range(self.kmax + 1):
            term = a[0] * b[n]
            for i in range(1, n + 1):
                term = term + a[i] * b[n - i]
            coeffs.append(term)
        dropped = any(not _is_zero(a[i]) and not _is_zero(b[j])
                      for i in range(1, self.kmax + 1)
                      for j in range(self.kmax + 1 - i, self.kmax + 1))
        return EpsilonSeries(coeffs, self.kmax,
                             self.truncated or other.truncated or dropped)

    def invert(self) -> 'EpsilonSeries':
        """Multiplicative inverse up to the cap; the constant term must be invertible."""
        a = self.coefficients
        b0 = _inverse(a[0])
        inverse = [b0]
        for n in range(1, self.kmax + 1):
            acc = a[1] * inverse[n - 1]
            for i in range(2, n + 1):
                acc = acc + a[i] * inverse[n - i]
            inverse.append(-(b0 * acc))
        return EpsilonSeries(inverse, self.kmax, True)

    def compose_scalar(self, coefficients: Sequence) -> 'EpsilonSeries':
        """
        Evaluate phi(a) = sum_n coefficients[n] * a^n for a series a without constant term.
        """
        if not _is_zero(self.coefficients[0]):
            raise ExactAlgebraError("compose_scalar needs a series with zero constant term")
        zero = _zero_like(self.coefficients[0])
        one_coeffs = [zero] * (self.kmax + 1)
        result = EpsilonSeries(one_coeffs, self.kmax)
        power = None
        for n, c in enumerate(coefficients):
            if n > self.kmax:
                break
            if n == 0:
                result = EpsilonSeries([zero + c] + one_coeffs[1:], self.kmax)
                power = self
                continue
            result = result + power.scale(c)
            power = power * self
        return EpsilonSeries(result.coefficients, self.kmax, True)

    def shift_pair_sum(self, derive: Callable) -> 'EpsilonSeries':
        """
        Expansion of a(T - eps) + a(T + eps) in powers of eps^2.

        Only even derivative orders survive: the eps^(2n) coefficient collects
        2 * derive(a_j, m) / m! over j + m/2 = n.
        """
        coeffs = []
        for n in range(self.kmax + 1):
            term = None
            for j in range(n + 1):
                m = 2 * (n - j)
                contribution = derive(self.coefficients[j], m) * sp.Rational(2, factorial(m))
                term = contribution if term is None else term + contribution
            coeffs.append(term)
        return EpsilonSeries(coeffs, self.kmax, True)

    def equals(self, other: 'EpsilonSeries') -> bool:
        self._check(other)
        return all(_is_zero(a - b) for a, b in zip(self.coefficients, other.coefficients))

    def __repr__(self):
        return f"EpsilonSeries(kmax={self.kmax}, {list(self.coefficients)})"


def coupling_ring(valences: Sequence[int]) -> PolyRing:
    """Ring QQ[s, t2, t4, ...] backing CouplingSeries for the given even valences."""
    names = ['s'] + [f't{v}' for v in valences]
    return PolyRing(names, QQ, grlex)


class CouplingSeries:
    """
    Truncated series in the couplings t_2, ..., t_2p with Laurent coefficients in s.

    Terms with total coupling degree above `cap` are dropped, and so are terms
    with some single exponent above `valence_cap` when one is set.
    """

    __slots__ = ('valences', 'cap', 'valence_cap', 'ring', 'element', 'truncated')

    def __init__(self, valences: Sequence[int], cap: int, element=None,
                 valence_cap: int = None, ring: PolyRing = None, truncated: bool = False):
        self.valences = tuple(valences)
        if any(v % 2 or v < 2 for v in self.valences):
            raise ExactAlgebraError(f"valences must be even integers >= 2: {self.valences}")
        self.cap = cap
        self.valence_cap = valence_cap
        self.ring = ring if ring is not None else coupling_ring(self.valences)
        element = self.ring.zero if element is None else element
        kept = {m: c for m, c in element.items() if self._admissible(m)}
        if len(kept) != len(element):
            truncated = True
        self.element = self.ring.from_dict(kept) if len(kept) != len(element) else element
        self.truncated = truncated

    def _admissible(self, monom) -> bool:
        if sum(monom[1:]) > self.cap:
            return False
        if self.valence_cap is not None and any(e > self.valence_cap for e in monom[1:]):
            return False
        return True

    def _new(self, element, truncated=False) -> 'CouplingSeries':
        return CouplingSeries(self.valences, self.cap, element, self.valence_cap,
                              self.ring, self.truncated or truncated)

    @property
    def s(self):
        return self.ring.gens[0]

    def gen(self, valence: int) -> 'CouplingSeries':
        """The coupling t_valence as a series."""
        return self._new(self.ring.gens[1 + self.valences.index(valence)])

    def constant(self, value) -> 'CouplingSeries':
        return self._new(self.ring(value))

    def monomial(self, coeff, s_power: int, exponents: Sequence[int] = None) -> 'CouplingSeries':
        exponents = tuple(exponents) if exponents is not None else (0,) * len(self.valences)
        return self._new(self.ring.from_dict({(s_power,) + exponents: coeff}))

    def _check(self, other: 'CouplingSeries'):
        if not isinstance(other, CouplingSeries):
            raise ExactAlgebraError("CouplingSeries arithmetic needs two CouplingSeries")
        if (other.valences, other.cap, other.valence_cap) != (self.valences, self.cap, self.valence_cap):
            raise ExactAlgebraError("mismatched caps or valence sets in CouplingSeries arithmetic")

    def __add__(self, other):
        if not isinstance(other, CouplingSeries):
            return self._new(self.element + self.ring(other))
        self._check(other)
        return CouplingSeries(self.valences, self.cap, self.element + other.element,
                              self.valence_cap, self.ring, self.truncated or other.truncated)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, CouplingSeries):
            return self._new(self.element - self.ring(other))
        self._check(other)
        return CouplingSeries(self.valences, self.cap, self.element - other.element,
                              self.valence_cap, self.ring, self.truncated or other.truncated)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._new(-self.element)

    def __mul__(self, other):
        if not isinstance(other, CouplingSeries):
            return self._new(self.element * self.ring.domain.convert(other))
        self._check(other)
        product, dropped = self._truncated_product(self.element, other.element)
        return CouplingSeries(self.valences, self.cap, product, self.valence_cap, self.ring,
                              self.truncated or other.truncated or dropped)

    __rmul__ = __mul__

    def _truncated_product(self, a, b):
        cap, vcap = self.cap, self.valence_cap
        zero = self.ring.domain.zero
        right = [(mb, cb, sum(mb[1:])) for mb, cb in b.items()]
        acc = {}
        dropped = False
        for ma, ca in a.items():
            da = sum(ma[1:])
            for mb, cb, db in right:
                if da + db > cap:
                    dropped = True
                    continue
                m = tuple(x + y for x, y in zip(ma, mb))
                if vcap is not None and any(e > vcap for e in m[1:]):
                    dropped = True
                    continue
                acc[m] = acc.get(m, zero) + ca * cb
        return self.ring.from_dict({m: c for m, c in acc.items() if c}), dropped

    def __pow__(self, n: int) -> 'CouplingSeries':
        if n < 0:
            return self.invert() ** (-n)
        result = self.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def coupling_free_part(self) -> dict:
        """Terms with all coupling exponents zero, keyed by s-exponent."""
        return {m[0]: c for m, c in self.element.items() if not any(m[1:])}

    def invert(self) -> 'CouplingSeries':
        """
        Inverse up to the cap.

        The coupling-free part must be a single monomial c*s^a; the rest is
        inverted as a geometric series in the remaining coupling-dependent terms.
        """
        head = self.coupling_free_part()
        if len(head) != 1:
            raise ExactAlgebraError(
                "coupling series is invertible only when its coupling-free part is one monomial c*s^a")
        (a, c), = head.items()
        lead_inv = self.monomial(self.ring.domain.one / c, -a)
        delta = self * lead_inv - 1
        result = self.constant(1)
        power = self.constant(1)
        for _ in range(self.cap):
            power = power * (-delta)
            if not power.element:
                break
            result = result + power
        out = result * lead_inv
        out.truncated = True
        return out

    def coefficients(self) -> dict:
        """Map coupling exponent vector -> Laurent polynomial in s (sympy expression)."""
        s = sp.Symbol('s')
        grouped = {}
        for m, c in self.element.items():
            key = tuple(m[1:])
            grouped[key] = grouped.get(key, 0) + QQ.to_sympy(c) * s ** m[0]
        return grouped

    def coefficient(self, exponents: Sequence[int]):
        return self.coefficients().get(tuple(exponents), sp.Integer(0))

    def is_zero(self) -> bool:
        return not self.element

    def max_total_degree(self) -> int:
        return max((sum(m[1:]) for m in self.element), default=0)

    def __repr__(self):
        return f"CouplingSeries({self.valences}, cap={self.cap}, {self.element.as_expr()})"


def series_arith(a, b, op: str):
    """
    Dispatch for truncated series arithmetic.

    op is add or mul (binary), invert (b ignored) or compose_scalar
    (b is the coefficient list of the outer power series).
    """
    if op == 'add':
        return a + b
    if op == 'mul':
        return a * b
    if op == 'invert':
        return a.invert()
    if op == 'compose_scalar':
        if isinstance(a, EpsilonSeries):
            return a.compose_scalar(b)
        return _compose_coupling(a, b)
    raise ExactAlgebraError(f"unknown series operation: {op!r}")


def _compose_coupling(a: CouplingSeries, coefficients: Iterable) -> CouplingSeries:
    if a.coupling_free_part():
        raise ExactAlgebraError("compose_scalar needs a series with zero coupling-free part")
    result = a.constant(0)
    power = a.constant(1)
    for n, c in enumerate(coefficients):
        if n > a.cap:
            break
        result = result + power * c
        power = power * a
    return result
