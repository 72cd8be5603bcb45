#!/usr/bin/env python3
"""
Free-energy integrand f(eps, t) = r (r[-1] + r[+1]) - 1/(2 t^2) and its
coefficients f_k, together with the change of variable from t to xi = r_0(1, t).

At T = 1 the deformed hodograph relation gives t = 1 + (1 - W(xi)) / (2 xi),
D = sigma / xi with sigma = 1 - W + xi W', and

    F^(k) = int_0^r0 R_k(xi) dxi,   R_k = (W - 1) sigma f_k / (4 xi^3).
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import sympy as sp
from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from scripts.algebra.exact import RatFunc
from scripts.algebra.jets import (T_SYMBOL, XI, ConcreteContext, JetExpr, JetRing,
                                  substitute)
from scripts.algebra.series import EpsilonSeries
from scripts.errors import ExactAlgebraError, TruncationError, UsageError
from scripts.expansion.potential import WFunction
from scripts.expansion.recurrence import RkExpansion

logger = logging.getLogger(__name__)


@dataclass
class FIntegrandSeries:
    """f_0..f_kmax as deformed jet expressions."""
    kmax: int
    coefficients: List[JetExpr]
    rk: RkExpansion

    def __getitem__(self, k: int) -> JetExpr:
        if k > self.kmax:
            raise TruncationError(f"f_{k} requested from a series assembled to k={self.kmax}")
        return self.coefficients[k]

    @property
    def mode(self) -> str:
        return self.rk.mode


def _s_squared(rk: RkExpansion) -> JetExpr:
    if rk.mode == 'generic':
        return JetExpr.generic(rk.jet_ring.s ** 2, rk.jet_ring, deformed=True)
    return JetExpr.concrete(rk.context.element(1 / T_SYMBOL ** 2), rk.context)


def assemble_f(kmax: int, rk: RkExpansion) -> FIntegrandSeries:
    """f_k, k <= kmax, from the eps-expansion of r (r[-1] + r[+1]) - s^2 / 2."""
    if not rk.deformed:
        raise UsageError("the free-energy integrand needs the deformed expansion")
    if rk.kmax < kmax:
        raise TruncationError(f"r_k known to k={rk.kmax}, f_k requested to k={kmax}")
    logger.info("Assembling f_k to k=%d...", kmax)
    r = EpsilonSeries(rk.coefficients[:kmax + 1], kmax)
    pair = r.shift_pair_sum(lambda value, m: value.derive(m) if m else value)
    f = r * pair
    coefficients = list(f.coefficients)
    coefficients[0] = coefficients[0] - _s_squared(rk) * sp.Rational(1, 2)
    if rk.mode == 'generic':
        for k, fk in enumerate(coefficients):
            if not fk.is_zero() and fk.weight() != {2 * k}:
                raise ExactAlgebraError(f"f_{k} is not homogeneous of weight {2 * k}")
    return FIntegrandSeries(kmax, coefficients, rk)


class XiRing:
    """
    Q[xi, X, sigma, S, w, W2, ..., Wn] with X = 1/xi, S = 1/sigma and w = W - 1.

    `partial` is d/dxi with w held fixed: the w-dependence is tracked through
    the relation W' = (sigma + w) X by the antiderivative recursion.
    """

    def __init__(self, order: int):
        self.order = order
        names = ['xi', 'X', 'sigma', 'S', 'w'] + [f'W{j}' for j in range(2, order + 1)]
        self.ring = PolyRing(names, QQ, grlex)
        self.xi, self.X, self.sigma, self.S, self.w = self.ring.gens[:5]
        self._W = {j: self.ring.gens[3 + j] for j in range(2, order + 1)}

    def W(self, j: int):
        return self._W[j]

    def normalize(self, p):
        """Cancel xi X and sigma S pairs."""
        acc: Dict = {}
        for m, c in p.items():
            m = list(m)
            a = min(m[0], m[1])
            m[0] -= a
            m[1] -= a
            b = min(m[2], m[3])
            m[2] -= b
            m[3] -= b
            key = tuple(m)
            acc[key] = acc.get(key, QQ.zero) + c
        return self.ring.from_dict({m: c for m, c in acc.items() if c})

    def partial(self, p):
        """d/dxi with w fixed: xi -> 1, X -> -X^2, sigma -> xi W2, S -> -S^2 xi W2, Wj -> W(j+1)."""
        ring = self.ring
        xi, X, S = self.xi, self.X, self.S
        W2 = self._W.get(2, ring.zero)
        images = [ring.one, -X ** 2, xi * W2, -S ** 2 * xi * W2, ring.zero]
        for j in range(2, self.order + 1):
            images.append(self._W[j + 1] if j < self.order else None)
        result = ring.zero
        for index, image in enumerate(images):
            partial = p.diff(ring.gens[index])
            if not partial:
                continue
            if image is None:
                raise TruncationError(f"d/dxi of W^({self.order}) needs a larger xi-ring")
            if image:
                result += partial * image
        return self.normalize(result)

    def by_w_power(self, p) -> Dict[int, object]:
        parts: Dict[int, dict] = {}
        for m, c in p.items():
            stripped = m[:4] + (0,) + m[5:]
            parts.setdefault(m[4], {})[stripped] = c
        return {i: self.ring.from_dict(d) for i, d in parts.items()}

    def from_jets(self, p, jet_ring: JetRing):
        """Image of a jet polynomial at T = 1: E -> xi S; s must be absent."""
        if any(m[2] for m in p.itermonoms()):
            raise ExactAlgebraError("s = 1/t survives in a k >= 1 integrand coefficient")
        images = [self.xi, self.xi * self.S, self.ring.zero]
        for j in range(2, jet_ring.order + 1):
            if j > self.order:
                raise TruncationError(f"xi-ring allocated to W^({self.order}), jets need W^({j})")
            images.append(self._W[j])
        return self.normalize(substitute(p, images, self.ring.one))

    def symbols(self, xi=XI) -> list:
        """Sympy images in raw W-derivative notation with sigma = 1 - W + xi W1."""
        W, W1 = sp.symbols('W W1')
        sigma = 1 - W + xi * W1
        return [xi, 1 / xi, sigma, 1 / sigma, W - 1] + [sp.Symbol(f'W{j}')
                                                        for j in range(2, self.order + 1)]

    def concrete_images(self, context: ConcreteContext) -> list:
        """Field images for a concrete W: sigma = 1 - W + xi W', w = W - 1."""
        field = context.field
        xi = field.gens[0]
        W0 = field.new(context.w_poly(0))
        sigma = 1 - W0 + xi * field.new(context.w_poly(1))
        if not sigma:
            raise ExactAlgebraError("sigma = 1 - W + xi W' vanishes identically")
        return ([xi, 1 / xi, sigma, 1 / sigma, W0 - 1]
                + [field.new(context.w_poly(j)) for j in range(2, self.order + 1)])


@dataclass
class XiIntegrand:
    """
    R_k as a generic xi-ring polynomial (any W) or as a concrete RatFunc in xi.
    """
    k: int
    generic: Optional[object] = None
    xi_ring: Optional[XiRing] = None
    ratfunc: Optional[RatFunc] = None

    def as_expr(self, xi=XI) -> sp.Expr:
        if self.generic is not None:
            return self.generic.as_expr(*self.xi_ring.symbols(xi))
        return self.ratfunc.as_expr()

    def is_zero(self) -> bool:
        if self.generic is not None:
            return not self.generic
        return self.ratfunc.is_zero()

    def specialize(self, W: WFunction) -> RatFunc:
        """R_k(xi) for a concrete W, as a reduced rational function."""
        if self.generic is None:
            return self.ratfunc
        context = ConcreteContext(W.expr)
        images = self.xi_ring.concrete_images(context)
        value = substitute(self.generic, images, context.field.one)
        return RatFunc(value)


def xi_ring_order(kmax: int) -> int:
    return 3 * kmax + 3


def to_xi_integrand(f: FIntegrandSeries, k: int, xi_ring: XiRing = None) -> XiIntegrand:
    """R_k = (W - 1) sigma f_k / (4 xi^3) at T = 1, for k >= 1."""
    if k < 1:
        raise UsageError("F^(0) is handled by the closed form; R_k needs k >= 1")
    fk = f[k]
    logger.info("Changing variables t -> xi for f_%d...", k)
    if f.mode == 'generic':
        xi_ring = xi_ring or XiRing(max(xi_ring_order(f.kmax), f.rk.jet_ring.order + 1))
        image = xi_ring.from_jets(fk.value, f.rk.jet_ring)
        R = xi_ring.normalize(image * xi_ring.w * xi_ring.sigma * xi_ring.X ** 3 * QQ(1, 4))
        return XiIntegrand(k, generic=R, xi_ring=xi_ring)
    context = f.rk.context
    W_expr = context.W_expr
    t_of_xi = 1 + (1 - W_expr) / (2 * XI)
    expr = fk.value.as_expr().subs(T_SYMBOL, t_of_xi)
    sigma = 1 - W_expr + XI * sp.diff(W_expr, XI)
    target = ConcreteContext(W_expr).field
    R = target.from_expr((W_expr - 1) * sigma * expr / (4 * XI ** 3))
    return XiIntegrand(k, ratfunc=RatFunc(R))


def generic_integrands(kmax: int) -> List[XiIntegrand]:
    """R_1..R_kmax for an arbitrary W."""
    from scripts.expansion.recurrence import solve_deformed_rk
    rk = solve_deformed_rk(None, kmax)
    f = assemble_f(kmax, rk)
    xi_ring = XiRing(xi_ring_order(kmax))
    return [to_xi_integrand(f, k, xi_ring) for k in range(1, kmax + 1)]


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    from scripts.expansion.recurrence import solve_deformed_rk
    rk = solve_deformed_rk(None, 2)
    f = assemble_f(2, rk)
    print("=" * 60)
    print("Integrand coefficients f_k (W1 = W', t deformation parameter)")
    print("=" * 60)
    for k, fk in enumerate(f.coefficients):
        print(f"  f_{k} = {sp.factor(fk.as_expr())}")
    print()
    R1 = to_xi_integrand(f, 1)
    print(f"  R_1 = {sp.factor(R1.as_expr())}")
