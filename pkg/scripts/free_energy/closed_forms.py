#!/usr/bin/env python3
"""
Closed forms F^(0)..F^(3) of the genus expansion and their specializations to
the quartic, two-valence and sixtic families.

Generic forms are written in r0 and the raw derivatives W1 = W'(r0),
W2 = W''(r0), ...; they hold on the T = 1 hodograph constraint W(r0) = 1.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Optional, Tuple

import mpmath as mp
import sympy as sp

from scripts.algebra.jets import XI
from scripts.config import working_precision
from scripts.errors import (DegeneratePotentialError, PhaseRegionError,
                            UnsupportedOrderError, UsageError)
from scripts.expansion.potential import WFunction

logger = logging.getLogger(__name__)

R0 = sp.Symbol('r0')
W_SYMBOLS = sp.symbols('W1:8')
W1, W2, W3, W4, W5, W6, W7 = W_SYMBOLS
G2, G4, G6 = sp.symbols('g2 g4 g6')
MAX_GENUS = 3


@dataclass(frozen=True)
class ClosedFormF:
    """
    F^(k) = rational + sum c * ln(arg).

    Log terms are kept apart from the rational part so that two closed forms
    can be compared exactly: the rational parts must agree and the weighted
    products of log arguments must have ratio one.
    """
    k: int
    rational: sp.Expr
    logs: Tuple[Tuple[sp.Rational, sp.Expr], ...] = ()
    symbols: Tuple[sp.Symbol, ...] = ()
    label: str = 'generic'

    @property
    def expression(self) -> sp.Expr:
        return self.rational + sum(c * sp.log(a) for c, a in self.logs)

    def subs(self, mapping: Dict) -> 'ClosedFormF':
        return ClosedFormF(self.k, self.rational.subs(mapping),
                           tuple((c, a.subs(mapping)) for c, a in self.logs),
                           self.symbols, self.label)

    def log_monomial(self) -> Tuple[sp.Rational, sp.Expr]:
        """(c0, prod arg^(c/c0)) so that the log part equals c0 * ln(product)."""
        if not self.logs:
            return sp.Integer(0), sp.Integer(1)
        c0 = self.logs[0][0]
        product = sp.Integer(1)
        for c, a in self.logs:
            ratio = sp.Rational(c) / c0
            if not ratio.is_integer:
                raise UsageError("log coefficients are not commensurate")
            product *= a ** ratio
        return c0, product

    def evaluate(self, values: Dict, precision: int = None) -> mp.mpf:
        """Numeric value at arbitrary precision; every log argument must be positive."""
        precision = working_precision(precision)
        with mp.workdps(precision + 10):
            subs = {k: (sp.Float(mp.nstr(v, precision + 10), precision + 10)
                        if isinstance(v, mp.mpf) else v) for k, v in values.items()}
            total = mp.mpf(0)
            for c, a in self.logs:
                arg = sp.N(a.subs(subs), precision + 10)
                if not arg.is_number or arg <= 0:
                    raise PhaseRegionError(f"log argument {a} is not positive at this point ({arg})")
                total += mp.mpf(sp.Rational(c).p) / sp.Rational(c).q * mp.log(mp.mpf(str(arg)))
            rational = sp.N(self.rational.subs(subs), precision + 10)
            if not rational.is_number:
                raise UsageError(f"closed form still depends on {rational.free_symbols}")
            total += mp.mpf(str(rational))
            return +total

    def __str__(self):
        return f"F^({self.k}) = {self.expression}"


def _generic_rational(k: int) -> sp.Expr:
    r0 = R0
    if k == 1:
        return sp.Integer(0)
    if k == 2:
        return (sp.Rational(-1, 240) + 1 / (240 * r0 ** 2 * W1 ** 2)
                + 7 * r0 * W2 ** 3 / (360 * W1 ** 5)
                + W2 * (9 * W2 - 58 * r0 * W3) / (2880 * W1 ** 4)
                + (6 * W2 - 2 * r0 * W3 + 5 * r0 ** 2 * W4) / (1440 * r0 * W1 ** 3))
    if k == 3:
        return (sp.Rational(1, 1008)
                - 1 / (1008 * r0 ** 4 * W1 ** 4)
                - W2 / (504 * r0 ** 3 * W1 ** 5)
                - (15 * W2 ** 2 - 4 * W3 * W1) / (6048 * r0 ** 2 * W1 ** 6)
                - (15 * W2 ** 3 + W4 * W1 ** 2 - 10 * W3 * W1 * W2) / (6048 * r0 * W1 ** 7)
                - (1575 * W2 ** 4 - 24 * W5 * W1 ** 3 + 200 * W3 ** 2 * W1 ** 2
                   + 300 * W4 * W1 ** 2 * W2 - 1800 * W3 * W1 * W2 ** 2) / (725760 * W1 ** 8)
                - r0 * (-21420 * W2 ** 5 - 133 * W6 * W1 ** 4 + 1644 * W5 * W1 ** 3 * W2
                        + 2488 * W3 * W4 * W1 ** 3 - 10170 * W4 * W1 ** 2 * W2 ** 2
                        + 40110 * W3 * W1 * W2 ** 3
                        - 12783 * W3 ** 2 * W1 ** 2 * W2) / (362880 * W1 ** 9)
                - r0 ** 2 * (34300 * W2 ** 6 - 35 * W7 * W1 ** 5 + 607 * W4 ** 2 * W1 ** 4
                             - 2915 * W3 ** 3 * W1 ** 3 + 539 * W6 * W1 ** 4 * W2
                             + 1006 * W3 * W5 * W1 ** 4 - 4284 * W5 * W1 ** 3 * W2 ** 2
                             + 22260 * W4 * W1 ** 2 * W2 ** 3 - 81060 * W3 * W1 * W2 ** 4
                             + 43050 * W3 ** 2 * W1 ** 2 * W2 ** 2
                             - 13452 * W3 * W4 * W1 ** 3 * W2) / (362880 * W1 ** 10))
    raise UnsupportedOrderError(f"no generic rational closed form for k={k}")


def generic_closed_form(k: int) -> ClosedFormF:
    """F^(k), k = 1..3, in r0 and raw derivatives W1..W7."""
    if k == 0:
        raise UsageError("F^(0) contains the integral of (W - W^2/2)/xi; it needs a concrete W")
    if k < 0 or k > MAX_GENUS:
        raise UnsupportedOrderError(f"closed forms exist for k <= {MAX_GENUS}, got k={k}")
    logs = ((sp.Rational(1, 12), R0 * W1),) if k == 1 else ()
    return ClosedFormF(k, _generic_rational(k), logs, (R0,) + W_SYMBOLS, 'generic')


def _f0_concrete(W: WFunction) -> ClosedFormF:
    integrand = sp.cancel((W.expr - W.expr ** 2 / 2) / XI)
    integral = sp.integrate(sp.expand(integrand), (XI, 0, R0))
    rational = sp.Rational(-3, 4) + sp.expand(integral)
    logs = ((sp.Rational(-1, 2), R0), (sp.Rational(-1, 2), sp.Integer(2)))
    return ClosedFormF(0, rational, logs, (R0,), 'concrete')


def closed_form_F(k: int, W: Optional[WFunction] = None, r0=None) -> ClosedFormF:
    """
    F^(k) for 0 <= k <= 3.

    Without W the generic form is returned. With W the raw derivatives are
    replaced by W^(j)(r0); with a numeric r0 the critical case W'(r0) = 0 is
    rejected.
    """
    if k < 0 or k > MAX_GENUS:
        raise UnsupportedOrderError(f"closed forms exist for k <= {MAX_GENUS}, got k={k}")
    if W is None:
        form = generic_closed_form(k)
    elif k == 0:
        form = _f0_concrete(W)
    else:
        generic = generic_closed_form(k)
        mapping = {Wj: W.derivative(j).as_expr().subs(XI, R0)
                   for j, Wj in enumerate(W_SYMBOLS, start=1)}
        form = generic.subs(mapping)
        form = ClosedFormF(k, form.rational, form.logs, (R0,), 'concrete')
    if r0 is not None and W is not None:
        slope = sp.N(W.derivative(1).as_expr().subs(XI, sp.sympify(r0)), 30)
        if slope == 0 or abs(slope) < sp.Float('1e-25'):
            raise DegeneratePotentialError("W'(r0) = 0: the closed forms are singular at a critical point")
    return form


# -- specialized families ------------------------------------------------------

def _two_valence_forms(nu: int, k: int) -> ClosedFormF:
    x = G2 * R0
    if k == 0:
        rational = (-sp.Rational(3 * (nu - 1), 4 * nu)
                    + sp.Rational((nu - 1) * (2 * nu + 1), nu * (nu + 1)) * x
                    - sp.Rational((nu - 1) ** 2, nu * (nu + 1)) * x ** 2)
        return ClosedFormF(0, rational, ((sp.Rational(-1, 2), 2 * R0),), (R0, G2), f'two_valence({nu})')
    if k == 1:
        return ClosedFormF(1, sp.Integer(0), ((sp.Rational(1, 12), nu - (nu - 1) * 2 * x),),
                           (R0, G2), f'two_valence({nu})')
    if k == 2:
        bracket = (-nu ** 3 * (8 * nu ** 2 + 5 * nu - 1)
                   + 2 * nu ** 2 * (nu - 1) * (16 * nu ** 2 + 40 * nu - 1) * x
                   - 4 * nu * (nu - 1) ** 2 * (8 * nu ** 2 - nu + 44) * x ** 2
                   - 96 * (nu - 1) ** 3 * (4 * nu + 1) * x ** 3
                   + 192 * (nu - 1) ** 4 * x ** 4)
        rational = (2 * x - 1) * (nu - 1) * bracket / (2880 * (nu - 2 * (nu - 1) * x) ** 5)
        return ClosedFormF(2, rational, (), (R0, G2), f'two_valence({nu})')
    raise UnsupportedOrderError(f"specialized forms exist for k <= 2, got k={k}")


def _quartic_forms(k: int) -> ClosedFormF:
    x = G2 * R0
    if k == 0:
        rational = sp.Rational(-3, 8) + sp.Rational(5, 6) * x - sp.Rational(1, 6) * x ** 2
        return ClosedFormF(0, rational, ((sp.Rational(-1, 2), 2 * R0),), (R0, G2), 'quartic')
    if k == 1:
        return ClosedFormF(1, sp.Integer(0), ((sp.Rational(1, 12), 2 * (1 - x)),), (R0, G2), 'quartic')
    if k == 2:
        rational = (2 * x - 1) ** 3 * (41 + 21 * x - 6 * x ** 2) / (11520 * (1 - x) ** 5)
        return ClosedFormF(2, rational, (), (R0, G2), 'quartic')
    raise UnsupportedOrderError(f"specialized forms exist for k <= 2, got k={k}")


def _sixtic_forms(k: int) -> ClosedFormF:
    r0 = R0
    if k == 0:
        rational = (sp.Rational(-1, 2) + sp.Rational(7, 6) * G2 * r0
                    - sp.Rational(1, 3) * (G2 * r0) ** 2 + sp.Rational(8, 5) * G4 * r0 ** 2
                    - sp.Rational(6, 5) * (G4 * r0 ** 2) ** 2 - sp.Rational(6, 5) * G2 * G4 * r0 ** 3)
        return ClosedFormF(0, rational, ((sp.Rational(-1, 2), 2 * r0),), (r0, G2, G4), 'sixtic')
    if k == 1:
        return ClosedFormF(1, sp.Integer(0),
                           ((sp.Rational(1, 12), 3 - 4 * G2 * r0 - 12 * G4 * r0 ** 2),),
                           (r0, G2, G4), 'sixtic')
    if k == 2:
        d = 12 * G4 * r0 ** 2 + 4 * G2 * r0 - 3
        rational = (sp.Rational(-1, 240)
                    + sp.Rational(593, 720) / d ** 2
                    + (169 * G2 ** 2 + 2928 * G4 - 1716 * G4 * G2 * r0) / (720 * G4 * d ** 3)
                    + (224 * G2 ** 4 + 7587 * G4 * G2 ** 2 + 45765 * G4 ** 2
                       - (57888 * G4 ** 2 * G2 + 6756 * G4 * G2 ** 3) * r0) / (6480 * G4 ** 2 * d ** 4)
                    + 7 * (6 * G2 ** 4 + 81 * G4 * G2 ** 2 + 243 * G4 ** 2
                           - (8 * G2 ** 5 + 126 * G4 * G2 ** 3 + 486 * G4 ** 2 * G2) * r0)
                    / (405 * G4 ** 2 * d ** 5))
        return ClosedFormF(2, rational, (), (r0, G2, G4), 'sixtic')
    raise UnsupportedOrderError(f"specialized forms exist for k <= 2, got k={k}")


def model_W(model: str, nu: int = 2) -> WFunction:
    """W of the family with symbolic couplings g2, g4 (or g_2nu), g6."""
    if model == 'quartic':
        expr = 2 * G2 * XI + 12 * G4 * XI ** 2
    elif model == 'two_valence':
        g = sp.Symbol(f'g{2 * nu}')
        expr = 2 * G2 * XI + nu * comb(2 * nu, nu) * g * XI ** nu
    elif model == 'sixtic':
        expr = 2 * G2 * XI + 12 * G4 * XI ** 2 + 60 * G6 * XI ** 3
    else:
        raise UsageError(f"unknown model {model!r}")
    return WFunction(sp.Poly(expr, XI))


def hodograph_elimination(model: str, nu: int = 2) -> Dict[sp.Symbol, sp.Expr]:
    """Solve W(r0) = 1 for the top coupling of the family."""
    if model == 'quartic':
        return {G4: (1 - 2 * G2 * R0) / (12 * R0 ** 2)}
    if model == 'two_valence':
        g = sp.Symbol(f'g{2 * nu}')
        return {g: (1 - 2 * G2 * R0) / (nu * comb(2 * nu, nu) * R0 ** nu)}
    if model == 'sixtic':
        return {G6: (1 - 2 * G2 * R0 - 12 * G4 * R0 ** 2) / (60 * R0 ** 3)}
    raise UsageError(f"unknown model {model!r}")


def _in_region(model: str, values: Dict) -> bool:
    return all(sp.sympify(v) > 0 for k, v in values.items() if k != R0 and sp.sympify(v).is_number)


def specialize_model(model: str, k: int, nu: int = 2, couplings: Dict = None) -> ClosedFormF:
    """
    Printed closed form of F^(k), k <= 2, for a family.

    Couplings outside the positive region are accepted with a warning.
    """
    if model == 'quartic':
        form = _quartic_forms(k)
    elif model == 'two_valence':
        if nu < 2:
            raise UsageError("two-valence models need nu >= 2")
        form = _two_valence_forms(nu, k)
    elif model == 'sixtic':
        form = _sixtic_forms(k)
    else:
        raise UsageError(f"unknown model {model!r}")
    if couplings:
        mapping = {sp.Symbol(str(name)) if isinstance(name, str) else name: sp.sympify(v)
                   for name, v in couplings.items()}
        if not _in_region(model, mapping):
            logger.warning("Couplings %s are outside the convex one-cut region of the %s family",
                           couplings, model)
        form = form.subs(mapping)
    return form


def closed_form_difference(a: ClosedFormF, b: ClosedFormF,
                           relation: Dict[sp.Symbol, sp.Expr] = None) -> Tuple[sp.Expr, sp.Expr]:
    """
    (rational difference, log-product ratio - 1) after applying `relation`;
    both vanish when the two closed forms agree.
    """
    relation = relation or {}
    rational = sp.cancel(sp.together((a.rational - b.rational).subs(relation)))
    ca, pa = a.log_monomial()
    cb, pb = b.log_monomial()
    if not a.logs and not b.logs:
        return rational, sp.Integer(0)
    if ca != cb:
        return rational, sp.Integer(1)
    ratio = sp.cancel(sp.together((pa / pb).subs(relation) - 1))
    return rational, ratio


def specialization_residual(model: str, k: int, nu: int = 2) -> Tuple[sp.Expr, sp.Expr]:
    """Printed family form minus the generic form on that family, modulo W(r0) = 1."""
    printed = specialize_model(model, k, nu)
    generic = closed_form_F(k, model_W(model, nu))
    return closed_form_difference(printed, generic, hodograph_elimination(model, nu))


if __name__ == '__main__':
    print("=" * 60)
    print("Generic closed forms")
    print("=" * 60)
    for k in range(1, MAX_GENUS + 1):
        print(f"  {generic_closed_form(k)}")
    print()
    for model, nu in [('quartic', 2), ('two_valence', 3), ('sixtic', 2)]:
        for k in range(3):
            rational, logs = specialization_residual(model, k, nu)
            print(f"  {model}(nu={nu}) k={k}: residual {rational}, log ratio {logs}")
