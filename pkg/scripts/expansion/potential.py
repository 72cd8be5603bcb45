#!/usr/bin/env python3
"""
Even polynomial potentials V(lambda) = sum_n g_2n lambda^n (lambda = z^2) and the
hodograph function W(xi) = sum_n binom(2n, n) n g_2n xi^n.
"""

import json
import logging
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Dict, List, Optional, Union

import mpmath as mp
import sympy as sp

from scripts.algebra.exact import format_rational, parse_rational
from scripts.algebra.jets import XI, w_normalizer
from scripts.config import POTENTIALS_DIR, working_precision
from scripts.errors import (DegeneratePotentialError, NonUniqueRootError,
                            PotentialFormatError, RootNotFoundError)

try:
    import tomllib
except ImportError:  # Python < 3.11
    tomllib = None

logger = logging.getLogger(__name__)

Coupling = Union[sp.Rational, sp.Symbol]


@dataclass(frozen=True)
class Potential:
    """
    Couplings keyed by the even degree 2n of z; the top coupling must be nonzero
    and, when numeric, positive.
    """
    couplings: Dict[int, Coupling]
    name: str = 'potential'

    def __post_init__(self):
        if not self.couplings:
            raise PotentialFormatError("a potential needs at least one coupling")
        if all(g == 0 for g in self.couplings.values()):
            raise PotentialFormatError("all couplings vanish")
        for degree in self.couplings:
            if degree < 2 or degree % 2:
                raise PotentialFormatError(f"coupling degree must be even and >= 2, got {degree}")
        top = self.couplings[self.degree]
        if top == 0:
            raise PotentialFormatError(f"top coupling g{self.degree} vanishes")
        if top.is_number and top <= 0:
            raise PotentialFormatError(f"top coupling g{self.degree} must be positive, got {top}")

    @property
    def degree(self) -> int:
        return max(d for d, g in self.couplings.items() if g != 0)

    @property
    def half_degree(self) -> int:
        return self.degree // 2

    @property
    def is_numeric(self) -> bool:
        return all(g.is_number for g in self.couplings.values())

    def coupling(self, degree: int) -> Coupling:
        return self.couplings.get(degree, sp.Integer(0))

    def V_lambda(self, lam) -> sp.Expr:
        """V as a polynomial in lambda = z^2."""
        return sum(g * lam ** (d // 2) for d, g in self.couplings.items())

    def V_z(self, z):
        """Derivative dV/dz = sum 2k g_2k z^(2k-1)."""
        return sum(d * g * z ** (d - 1) for d, g in self.couplings.items())

    def scaled(self, c) -> 'Potential':
        """The potential g / c."""
        c = sp.sympify(c)
        return Potential({d: g / c for d, g in self.couplings.items()}, f'{self.name}/{c}')

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'couplings': {str(d): (format_rational(g) if g.is_number else str(g))
                          for d, g in sorted(self.couplings.items())},
        }


def _parse_coupling(value) -> Coupling:
    if isinstance(value, str) and value.strip().isidentifier():
        return sp.Symbol(value.strip())
    return parse_rational(value)


def potential_from_dict(data: dict, name: str = None) -> Potential:
    if 'couplings' not in data or not isinstance(data['couplings'], dict):
        raise PotentialFormatError("potential file must contain a 'couplings' table")
    couplings = {}
    for key, value in data['couplings'].items():
        try:
            degree = int(str(key).lstrip('g'))
        except ValueError:
            raise PotentialFormatError(f"coupling key must be an even degree, got {key!r}")
        couplings[degree] = _parse_coupling(value)
    return Potential(couplings, data.get('name', name or 'potential'))


def load_potential(path: Union[str, Path]) -> Potential:
    """
    Load a potential from JSON or TOML: {"couplings": {"2": "3/2", "4": "-1/4"}}.

    A bare name is looked up in the bundled data/potentials directory.
    """
    path = Path(path)
    if not path.exists() and not path.suffix:
        path = POTENTIALS_DIR / f'{path.name}.json'
    elif not path.exists() and (POTENTIALS_DIR / path.name).exists():
        path = POTENTIALS_DIR / path.name
    if not path.exists():
        raise PotentialFormatError(f"potential file not found: {path}")
    try:
        if path.suffix == '.toml':
            if tomllib is None:
                raise PotentialFormatError("TOML potentials need Python 3.11 (tomllib)")
            with open(path, 'rb') as f:
                data = tomllib.load(f)
        else:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
    except (json.JSONDecodeError, ValueError) as e:
        raise PotentialFormatError(f"cannot parse {path}: {e}")
    potential = potential_from_dict(data, path.stem)
    logger.info("Loaded potential %s from %s", potential.name, path)
    return potential


def bleher_its_path(pot: Potential, t) -> Potential:
    """
    Couplings g(t) of the deformation joining the model (t = 1) to the Gaussian (t -> oo):
    g2(t) = 1 - 1/t + g2/t and g2k(t) = g2k / t^k.
    """
    t = sp.sympify(t)
    couplings = {d: g / t ** (d // 2) for d, g in pot.couplings.items()}
    couplings[2] = sp.Integer(1) - 1 / t + pot.coupling(2) / t
    return Potential(couplings, f'{pot.name}(t={t})')


@dataclass(frozen=True)
class WFunction:
    """W(xi) = sum_n binom(2n, n) n g_2n xi^n as a polynomial in xi over the couplings."""
    poly: sp.Poly
    potential: Optional[Potential] = None

    @property
    def expr(self) -> sp.Expr:
        return self.poly.as_expr()

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @property
    def is_numeric(self) -> bool:
        return all(c.is_number for c in self.poly.coeffs())

    def derivative(self, j: int = 1) -> sp.Poly:
        return self.poly.diff((XI, j)) if j else self.poly

    def __call__(self, value):
        return self.poly.eval(value)


def build_W(pot: Potential) -> WFunction:
    """W(xi) = sum_n binom(2n, n) n g_2n xi^n."""
    expr = sum(comb(d, d // 2) * (d // 2) * g * XI ** (d // 2) for d, g in pot.couplings.items())
    return WFunction(sp.Poly(expr, XI), pot)


def w_derived(W: WFunction, j: int) -> sp.Poly:
    """W_j(xi) = W^(j)(xi) / (2^j (2j-1)!!)."""
    if j < 1:
        raise ValueError("w_derived needs j >= 1")
    return W.derivative(j) * w_normalizer(j)


@dataclass
class HodographRoot:
    """Positive root of W(r0) = T refined to `precision` digits."""
    value: mp.mpf
    exact: Optional[sp.Expr]
    precision: int
    critical: bool
    certified: bool
    bracket: tuple
    roots: List = field(default_factory=list)

    @property
    def alpha(self) -> mp.mpf:
        """Endpoint of the eigenvalue support, alpha = 2 sqrt(r0)."""
        with mp.workdps(self.precision):
            return 2 * mp.sqrt(self.value)


def _positive_real_roots(P: sp.Poly) -> List:
    """Distinct positive real roots as (exact value or None, rational bracket) pairs."""
    roots = []
    seen_exact = set()
    for factor, _ in P.factor_list()[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            root = -b / a
            if root > 0 and root not in seen_exact:
                seen_exact.add(root)
                roots.append((root, (root, root)))
    for (lo, hi), _ in P.intervals():
        lo, hi = sp.Rational(lo), sp.Rational(hi)
        if hi <= 0:
            continue
        if any(lo <= r <= hi for r in seen_exact):
            continue
        if lo <= 0:
            lo = sp.Rational(0)
            if sp.sign(P.eval(lo)) == sp.sign(P.eval(hi)):
                continue
        roots.append((None, (lo, hi)))
    roots.sort(key=lambda item: item[1][0])
    return roots


def hodograph_root(W: WFunction, T=1, precision: int = None,
                   allow_multiple: bool = False) -> HodographRoot:
    """
    Solve W(r0) = T for the positive root with a sign-change bracket.

    Several positive roots raise NonUniqueRootError unless allow_multiple is
    set, in which case the smallest one is returned with certified=False.
    """
    if not W.is_numeric:
        raise PotentialFormatError("numeric root solving needs numeric couplings")
    precision = working_precision(precision)
    T = parse_rational(T)
    P = W.poly - T
    if P.is_zero or W.derivative(1).is_zero:
        raise DegeneratePotentialError("W' vanishes identically")
    candidates = _positive_real_roots(P)
    if not candidates:
        raise RootNotFoundError(f"W(r0) = {T} has no positive root")
    certified = len(candidates) == 1
    if not certified and not allow_multiple:
        raise NonUniqueRootError(
            f"W(r0) = {T} has {len(candidates)} positive roots; none is certified as one-cut",
            roots=[c[0] if c[0] is not None else c[1] for c in candidates])
    exact, (lo, hi) = candidates[0]
    W1 = W.derivative(1)
    with mp.workdps(precision + 10):
        if exact is not None:
            value = mp.mpf(exact.p) / exact.q
            critical = W1.eval(exact) == 0
        else:
            f = sp.lambdify(XI, P.as_expr(), 'mpmath')
            a, b = mp.mpf(lo.p) / lo.q, mp.mpf(hi.p) / hi.q
            if mp.sign(f(a)) == mp.sign(f(b)):
                raise RootNotFoundError(f"no sign change on the isolating bracket [{lo}, {hi}]")
            value = mp.findroot(f, (a, b), solver='illinois')
            fprime = sp.lambdify(XI, W1.as_expr(), 'mpmath')
            critical = abs(fprime(value)) < mp.mpf(10) ** (-(precision // 2))
    logger.info("Hodograph root r0 = %s (critical=%s)", mp.nstr(value, 15), critical)
    return HodographRoot(value=value, exact=exact, precision=precision, critical=critical,
                         certified=certified, bracket=(lo, hi),
                         roots=[c[0] if c[0] is not None else c[1] for c in candidates])


def quartic_r0(g2, g4) -> sp.Expr:
    """Closed form r0 = (-g2 + sqrt(g2^2 + 12 g4)) / (12 g4) of 2 g2 r0 + 12 g4 r0^2 = 1."""
    g2, g4 = sp.sympify(g2), sp.sympify(g4)
    return (-g2 + sp.sqrt(g2 ** 2 + 12 * g4)) / (12 * g4)


if __name__ == '__main__':
    print("=" * 60)
    print("Hodograph roots of the bundled potentials")
    print("=" * 60)
    for name in ['gaussian', 'quartic', 'bmp60']:
        pot = load_potential(name)
        W = build_W(pot)
        root = hodograph_root(W, 1, 30)
        print(f"  {name}: W = {W.expr}, r0 = {mp.nstr(root.value, 20)}, critical = {root.critical}")
