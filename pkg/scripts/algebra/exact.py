#!/usr/bin/env python3
"""
Exact scalars and reduced rational functions.

Scalars are sympy rationals; polynomials are sparse sympy ring elements and
rational functions wrap elements of a sympy fraction field, which keeps
numerator and denominator gcd-reduced with a positive leading denominator
coefficient under the graded lexicographic order.
"""

import logging
from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp
from sympy import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

from scripts.errors import ExactAlgebraError, PotentialFormatError

logger = logging.getLogger(__name__)


def parse_rational(value) -> sp.Rational:
    """
    Parse "p/q", an integer, a terminating decimal string or a number into a Rational.

    Floats are accepted only through their decimal string so that 0.1 means 1/10.
    """
    if isinstance(value, sp.Rational):
        return value
    if isinstance(value, bool):
        raise PotentialFormatError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    text = str(value).strip()
    if not text:
        raise PotentialFormatError("empty rational string")
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise PotentialFormatError(f"malformed rational string: {value!r}")
    return sp.Rational(frac.numerator, frac.denominator)


def format_rational(value) -> str:
    """Serialize an exact rational as "p/q" (or "p" when integral)."""
    q = sp.Rational(value)
    if q.q == 1:
        return str(q.p)
    return f"{q.p}/{q.q}"


def rational_field(symbols: Sequence) -> FracField:
    """Field of rational functions over QQ in the given symbols, graded lex order."""
    syms = tuple(sp.Symbol(s) if isinstance(s, str) else s for s in symbols)
    return FracField(syms, QQ, grlex)


class RatFunc:
    """
    Immutable reduced quotient of two polynomials with rational coefficients.
    """

    __slots__ = ('_value',)

    def __init__(self, value):
        object.__setattr__(self, '_value', value)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_expr(cls, expr, symbols: Iterable = None) -> 'RatFunc':
        expr = sp.sympify(expr)
        if symbols is None:
            symbols = sorted(expr.free_symbols, key=lambda s: s.name)
        symbols = list(symbols)
        if not symbols:
            symbols = [sp.Symbol('xi')]
        field = rational_field(symbols)
        try:
            return cls(field.from_expr(expr))
        except ValueError as e:
            raise ExactAlgebraError(f"not a rational function of {symbols}: {e}")

    @property
    def field(self) -> FracField:
        return self._value.field

    @property
    def symbols(self) -> tuple:
        return self._value.field.symbols

    @property
    def value(self):
        return self._value

    @property
    def num(self):
        return self._value.numer

    @property
    def den(self):
        return self._value.denom

    def is_zero(self) -> bool:
        return not self._value

    def as_expr(self) -> sp.Expr:
        return self._value.as_expr()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.field == self.field:
                return self._value, other._value
            merged = sorted(set(self.symbols) | set(other.symbols), key=lambda s: s.name)
            field = rational_field(merged)
            return field.from_expr(self.as_expr()), field.from_expr(other.as_expr())
        return self._value, self.field.from_expr(sp.sympify(other))

    def __add__(self, other):
        a, b = self._coerce(other)
        return RatFunc(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return RatFunc(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return RatFunc(b - a)

    def __mul__(self, other):
        a, b = self._coerce(other)
        return RatFunc(a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if not b:
            raise ExactAlgebraError("division by the zero rational function")
        return RatFunc(a / b)

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if not a:
            raise ExactAlgebraError("division by the zero rational function")
        return RatFunc(b / a)

    def __neg__(self):
        return RatFunc(-self._value)

    def __pow__(self, n: int):
        if n < 0 and not self._value:
            raise ExactAlgebraError("division by the zero rational function")
        return RatFunc(self._value ** n)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            a, b = self._coerce(other)
            return a == b
        try:
            a, b = self._coerce(other)
        except (ExactAlgebraError, ValueError, TypeError):
            return NotImplemented
        return a == b

    def __hash__(self):
        return hash(self.as_expr())

    def diff(self, symbol) -> 'RatFunc':
        gen = self.field.from_expr(sp.Symbol(symbol) if isinstance(symbol, str) else symbol)
        return RatFunc(self._value.diff(gen))

    def subs(self, mapping: dict) -> 'RatFunc':
        """Substitute exact values or expressions for symbols, staying in the same field."""
        expr = self.as_expr().subs({sp.Symbol(k) if isinstance(k, str) else k: v
                                    for k, v in mapping.items()})
        return RatFunc(self.field.from_expr(sp.sympify(expr)))

    def evaluate(self, values: dict, precision: int = None):
        """
        Evaluate at a point.

        Exact rationals give an exact Rational; anything else goes through mpmath.
        """
        subs = {sp.Symbol(k) if isinstance(k, str) else k: v for k, v in values.items()}
        num = self.num.as_expr().subs(subs)
        den = self.den.as_expr().subs(subs)
        if den == 0:
            raise ExactAlgebraError("rational function evaluated at a pole")
        result = num / den
        if precision is None:
            return result
        return sp.N(result, precision)

    def __repr__(self):
        return f"RatFunc({self.as_expr()})"

    def __str__(self):
        return str(self.as_expr())


def poly_ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Exact arithmetic on reduced rational functions; op is add, sub, mul or div."""
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise ExactAlgebraError(f"unknown rational-function operation: {op!r}")


def laurent_monomial_inverse(expr: sp.Expr, inverse_pairs: dict) -> sp.Expr:
    """
    Rewrite a monomial denominator using inverse generator pairs.

    inverse_pairs maps a symbol to the symbol standing for its reciprocal; the
    returned expression is the reciprocal of expr written without division.
    """
    coeff, factors = sp.Mul(expr).as_coeff_mul()
    result = sp.Rational(1) / coeff
    for factor in factors:
        base, exp = factor.as_base_exp()
        if base not in inverse_pairs:
            raise ExactAlgebraError(f"denominator factor {factor} has no declared inverse")
        result *= inverse_pairs[base] ** exp
    return result
