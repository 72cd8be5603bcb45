#!/usr/bin/env python3
"""
Differential ring of T-derivatives of the leading recurrence coefficient.

Generic mode works in Q[xi, E, s, W2, ..., Wn] where xi is r0, E = 1/D,
s = 1/t and Wj is the raw derivative W^(j)(xi). The derivation d/dT acts by

    xi -> E,   E -> -W2 E^3,   s -> 0,   Wj -> W(j+1) E,

which is the same rule for the deformed (D = 2(t-1) + W') and undeformed
(D = W') problems, because t is T-independent. Concrete mode replaces every
symbol by a rational function of xi (and t) built from a stored polynomial W.
"""

import logging
from math import prod
from typing import Dict, List, Sequence

import sympy as sp
from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from scripts.algebra.exact import RatFunc, rational_field
from scripts.errors import ExactAlgebraError, TruncationError

logger = logging.getLogger(__name__)

XI = sp.Symbol('xi')
T_SYMBOL = sp.Symbol('t')


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def w_normalizer(j: int) -> sp.Rational:
    """1 / (2^j (2j-1)!!), the factor turning W^(j) into W_j."""
    return sp.Rational(1, 2 ** j * double_factorial(2 * j - 1))


class JetRing:
    """
    Polynomial ring carrying the d/dT derivation.

    `order` is the highest raw derivative W^(order) allocated. With `w_cap = p`
    the ring models a polynomial W of degree p: Wj = 0 for j > p and W_p is
    constant. Without a cap, differentiating W^(order) raises TruncationError.
    """

    def __init__(self, order: int, w_cap: int = None):
        if w_cap is not None:
            order = w_cap
        self.order = max(order, 1)
        self.w_cap = w_cap
        names = ['xi', 'E', 's'] + [f'W{j}' for j in range(2, self.order + 1)]
        self.ring = PolyRing(names, QQ, grlex)
        gens = self.ring.gens
        self.xi, self.E, self.s = gens[0], gens[1], gens[2]
        self._w = {j: gens[1 + j] for j in range(2, self.order + 1)}
        self._images = self._build_images()

    def _build_images(self) -> List:
        ring = self.ring
        images = [self.E]
        images.append(-self._w[2] * self.E ** 3 if 2 in self._w else ring.zero)
        images.append(ring.zero)
        for j in range(2, self.order + 1):
            if j < self.order:
                images.append(self._w[j + 1] * self.E)
            elif self.w_cap is not None:
                images.append(ring.zero)
            else:
                images.append(None)
        return images

    def w(self, j: int):
        """The raw derivative W^(j) as a ring element (j >= 2)."""
        if j < 2:
            raise ExactAlgebraError("W' is not a generator of the jet ring; it enters through E")
        if j in self._w:
            return self._w[j]
        if self.w_cap is not None:
            return self.ring.zero
        raise TruncationError(f"W^({j}) is beyond the allocated jet order {self.order}")

    def w_normalized(self, j: int):
        return self.w(j) * w_normalizer(j)

    def derive(self, p, order: int = 1):
        """Apply d/dT `order` times."""
        for _ in range(order):
            result = self.ring.zero
            for index, image in enumerate(self._images):
                gen = self.ring.gens[index]
                partial = p.diff(gen)
                if not partial:
                    continue
                if image is None:
                    raise TruncationError(
                        f"derivative of W^({self.order}) needed; allocate a larger jet order")
                if image:
                    result += partial * image
            p = result
        return p

    def weight(self, monom) -> int:
        """T-weight of a monomial: E counts +1, every Wj counts -1."""
        return monom[1] - sum(monom[3:])

    def is_homogeneous(self, p, weight: int) -> bool:
        return all(self.weight(m) == weight for m in p.itermonoms())

    def symbols(self, deformed: bool, xi=XI) -> list:
        """Sympy images of the generators in W-derivative notation."""
        w1 = sp.Symbol('W1')
        D = 2 * (T_SYMBOL - 1) + w1 if deformed else w1
        return [xi, 1 / D, 1 / T_SYMBOL] + [sp.Symbol(f'W{j}') for j in range(2, self.order + 1)]


def substitute(poly, images: Sequence, one):
    """
    Evaluate a sparse polynomial at `images` (one image per ring generator).

    Powers of each image are cached; `one` is the unit of the target algebra.
    """
    cache: Dict = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            if e == 1:
                cache[key] = images[i]
            else:
                half = power(i, e // 2)
                value = half * half
                if e % 2:
                    value = value * images[i]
                cache[key] = value
        return cache[key]

    total = None
    for monom, coeff in poly.items():
        term = None
        for i, e in enumerate(monom):
            if e:
                factor = power(i, e)
                term = factor if term is None else term * factor
        if term is None:
            term = one
        term = term * QQ.to_sympy(coeff)
        total = term if total is None else total + term
    return total if total is not None else one * 0


class ConcreteContext:
    """
    A concrete polynomial W(xi) with derivatives precomputed in a fraction field.

    Couplings may be numbers or sympy symbols; symbolic couplings become
    generators of the field.
    """

    def __init__(self, W_expr: sp.Expr, deformed: bool = False, xi: sp.Symbol = XI):
        self.W_expr = sp.expand(W_expr)
        self.xi = xi
        self.deformed = deformed
        couplings = sorted(self.W_expr.free_symbols - {xi, T_SYMBOL}, key=lambda s: s.name)
        symbols = [xi] + ([T_SYMBOL] if deformed else []) + couplings
        self.field = rational_field(symbols)
        self.poly_ring = self.field.ring
        self.degree = sp.Poly(self.W_expr, xi).degree() if self.W_expr != 0 else 0
        self._xi_gen = self.field.gens[0]
        self._derivs = {}
        W1 = self.w_poly(1)
        if deformed:
            t = self.poly_ring.gens[1]
            self.D_poly = 2 * (t - 1) + W1
        else:
            self.D_poly = W1
        if not self.D_poly:
            raise ExactAlgebraError("D vanishes identically for this potential")
        self.D = self.field.new(self.D_poly)

    def w_poly(self, j: int):
        """W^(j)(xi) as an element of the polynomial ring under the field."""
        if j not in self._derivs:
            self._derivs[j] = self.poly_ring.from_expr(sp.diff(self.W_expr, self.xi, j)) \
                if j <= self.degree else self.poly_ring.zero
        return self._derivs[j]

    def element(self, expr) -> object:
        return self.field.from_expr(sp.sympify(expr))

    def derive(self, value, order: int = 1):
        for _ in range(order):
            value = value.diff(self._xi_gen) / self.D
        return value

    def specialize(self, poly, jet_ring: JetRing):
        """
        Map a generic jet polynomial to this field over one common denominator
        D^a t^b, then let the field cancel once.
        """
        monoms = list(poly.items())
        if not monoms:
            return self.field.zero
        max_E = max(m[1] for m, _ in monoms)
        max_s = max(m[2] for m, _ in monoms)
        if max_s and not self.deformed:
            raise ExactAlgebraError("s = 1/t appears in an undeformed jet expression")
        ring = self.poly_ring
        xi = ring.gens[0]
        t = ring.gens[1] if self.deformed else ring.one
        images = [xi, self.D_poly, t] + [self.w_poly(j) for j in range(2, jet_ring.order + 1)]
        cache = {}

        def power(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = images[i] ** e
            return cache[(i, e)]

        numer = ring.zero
        for monom, coeff in monoms:
            term = ring(coeff)
            for i, e in enumerate(monom):
                if i == 1:
                    e = max_E - e
                elif i == 2:
                    e = max_s - e
                if e:
                    term = term * power(i, e)
                    if not term:
                        break
            numer += term
        denom = self.D_poly ** max_E * (t ** max_s if self.deformed else ring.one)
        return self.field.new(numer, denom)


class JetExpr:
    """
    An element of the T-differential ring, generic or concrete.

    Generic values are polynomials in a JetRing; concrete values are elements
    of the fraction field of a ConcreteContext.
    """

    __slots__ = ('mode', 'value', 'deformed', 'context')

    def __init__(self, mode: str, value, deformed: bool, context):
        if mode not in ('generic', 'concrete'):
            raise ExactAlgebraError(f"unknown jet mode {mode!r}")
        self.mode = mode
        self.value = value
        self.deformed = deformed
        self.context = context

    @classmethod
    def generic(cls, value, jet_ring: JetRing, deformed: bool = False) -> 'JetExpr':
        return cls('generic', value, deformed, jet_ring)

    @classmethod
    def concrete(cls, value, context: ConcreteContext) -> 'JetExpr':
        return cls('concrete', value, context.deformed, context)

    def _wrap(self, value) -> 'JetExpr':
        return JetExpr(self.mode, value, self.deformed, self.context)

    def _other(self, other):
        if isinstance(other, JetExpr):
            if other.mode != self.mode or other.context is not self.context:
                raise ExactAlgebraError("jet expressions from different contexts cannot be combined")
            return other.value
        if self.mode == 'generic':
            return self.context.ring(other)
        return self.context.field(other)

    def __add__(self, other):
        return self._wrap(self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.value - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.value)

    def __mul__(self, other):
        return self._wrap(self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def __truediv__(self, other):
        other = self._other(other)
        if self.mode == 'generic':
            if not other.is_ground or not other:
                raise ExactAlgebraError("generic jet division only by nonzero constants")
            return self._wrap(self.value * (QQ.one / other.LC))
        if not other:
            raise ExactAlgebraError("division by the zero rational function")
        return self._wrap(self.value / other)

    def is_zero(self) -> bool:
        return not self.value

    def zero_like(self) -> 'JetExpr':
        return self._wrap(self.value * 0)

    def inverse(self) -> 'JetExpr':
        if not self.value:
            raise ExactAlgebraError("zero jet expression is not invertible")
        if self.mode == 'generic':
            if not self.value.is_ground:
                raise ExactAlgebraError("a non-constant generic jet polynomial is not invertible")
            return self._wrap(self.context.ring(QQ.one / self.value.LC))
        return self._wrap(1 / self.value)

    def derive(self, order: int = 1) -> 'JetExpr':
        return self._wrap(self.context.derive(self.value, order))

    def weight(self) -> set:
        if self.mode != 'generic':
            raise ExactAlgebraError("weights are defined on generic jet expressions")
        return {self.context.weight(m) for m in self.value.itermonoms()}

    def specialize(self, context: ConcreteContext) -> 'JetExpr':
        if self.mode != 'generic':
            raise ExactAlgebraError("only generic jet expressions can be specialized")
        if context.deformed != self.deformed:
            raise ExactAlgebraError("deformation context mismatch in specialization")
        return JetExpr.concrete(context.specialize(self.value, self.context), context)

    def as_ratfunc(self) -> RatFunc:
        if self.mode != 'concrete':
            raise ExactAlgebraError("only concrete jet expressions are rational functions")
        return RatFunc(self.value)

    def as_expr(self, xi=XI) -> sp.Expr:
        """Sympy expression; generic values use W1, W2, ... and t for the raw derivatives."""
        if self.mode == 'generic':
            return self.value.as_expr(*self.context.symbols(self.deformed, xi))
        expr = self.value.as_expr()
        return expr.subs(XI, xi) if xi != XI else expr

    def __eq__(self, other):
        if isinstance(other, JetExpr):
            return self.mode == other.mode and self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash((self.mode, self.value))

    def __repr__(self):
        return f"JetExpr({self.mode}, {self.as_expr()})"


def derive_T(e: JetExpr, order: int = 1) -> JetExpr:
    """Apply the T-derivation `order` times."""
    if order < 0:
        raise ExactAlgebraError("derivative order must be nonnegative")
    return e.derive(order) if order else e
