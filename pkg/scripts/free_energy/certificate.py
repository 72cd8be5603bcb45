#!/usr/bin/env python3
"""
Total-derivative certificates: the closed form F^(k), read as a function of
xi on the constraint surface W(xi) = 1, lifts to an antiderivative of R_k.

Write Phi = sum_i Phi_i w^i with w = W - 1 and Phi_0 the closed form with
r0 -> xi and W' -> sigma X. Because W' = (sigma + w) X, dPhi/dxi = R_k splits
by powers of w into

    Phi_{i+1} = xi S (R^(i) - partial Phi_i - i X Phi_i) / (i + 1).

The lift is a certificate when the recursion terminates and Phi vanishes at
xi = 0 (where w = -1 and sigma = 1), so that int_0^r0 R_k = F^(k).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Tuple

import sympy as sp
from sympy import QQ

from scripts.algebra.exact import laurent_monomial_inverse
from scripts.errors import CertificateMismatch, UnsupportedOrderError
from scripts.free_energy.closed_forms import R0, W1, MAX_GENUS, ClosedFormF, generic_closed_form
from scripts.free_energy.integrand import XiIntegrand, XiRing, generic_integrands

logger = logging.getLogger(__name__)


@dataclass
class DerivativeCertificate:
    """Antiderivative lift of R_k whose w^0 part is the closed form F^(k)."""
    k: int
    pieces: List = field(default_factory=list)
    logs: Tuple = ()
    boundary: sp.Expr = sp.Integer(0)
    xi_ring: XiRing = None

    @property
    def holds(self) -> bool:
        return self.boundary == 0

    def antiderivative(self):
        """Sum_i Phi_i w^i as one xi-ring polynomial (log terms excluded)."""
        total = self.xi_ring.ring.zero
        for i, piece in enumerate(self.pieces):
            total += piece * self.xi_ring.w ** i
        return total


def closed_form_to_xi(form: ClosedFormF, xi_ring: XiRing):
    """
    Rational part of a generic closed form as a xi-ring polynomial with
    r0 -> xi and W1 -> sigma X; denominators must be monomials in r0 and W1.
    """
    ring = xi_ring.ring
    xi, X, sigma, S = [sp.Symbol(n) for n in ('xi', 'X', 'sigma', 'S')]
    inverse_pairs = {R0: X, W1: xi * S}
    direct = {R0: xi, W1: sigma * X}
    total = ring.zero
    for term in sp.Add.make_args(sp.expand(form.rational)):
        numer, denom = sp.fraction(sp.factor_terms(term))
        image = sp.expand(numer.subs(direct) * laurent_monomial_inverse(denom, inverse_pairs))
        total += ring.from_expr(image) if image != 0 else ring.zero
    return xi_ring.normalize(total)


def _log_terms(form: ClosedFormF, xi_ring: XiRing) -> Tuple[Tuple[sp.Rational, object], ...]:
    """Log arguments mapped into the xi-ring; each must normalize to c * monomial."""
    xi, X, sigma, S = [sp.Symbol(n) for n in ('xi', 'X', 'sigma', 'S')]
    out = []
    for c, arg in form.logs:
        image = xi_ring.normalize(xi_ring.ring.from_expr(sp.expand(arg.subs({R0: xi, W1: sigma * X}))))
        if len(image) != 1:
            raise CertificateMismatch(f"log argument {arg} is not a monomial on the constraint surface",
                                      residual=arg)
        out.append((sp.Rational(c), image))
    return tuple(out)


def _log_derivative(logs, xi_ring: XiRing):
    """d/dxi of sum c ln(a m) for monomials m in xi, X, sigma, S."""
    ring = xi_ring.ring
    W2 = xi_ring.W(2)
    per_gen = [xi_ring.X, -xi_ring.X, xi_ring.xi * W2 * xi_ring.S, -xi_ring.S * xi_ring.xi * W2]
    total = ring.zero
    for c, monomial in logs:
        (m, _), = monomial.items()
        if any(m[4:]):
            raise CertificateMismatch("log argument depends on w or higher derivatives", residual=monomial)
        for index in range(4):
            if m[index]:
                total += per_gen[index] * (m[index] * QQ(c.p, c.q))
    return xi_ring.normalize(total)


def _boundary_value(pieces, logs, xi_ring: XiRing) -> sp.Expr:
    """Phi at xi = 0: w = -1, sigma = S = 1; every X-term must cancel."""
    ring = xi_ring.ring
    total = ring.zero
    for i, piece in enumerate(pieces):
        total += piece * (-1) ** i
    total = xi_ring.normalize(total)
    value = sp.Integer(0)
    symbols = ring.symbols
    for m, c in total.items():
        if m[1]:
            raise CertificateMismatch("antiderivative is singular at xi = 0", residual=total.as_expr())
        if m[0]:
            continue
        term = QQ.to_sympy(c)
        for index in range(5, len(m)):
            term *= symbols[index] ** m[index]
        value += term
    for c, monomial in logs:
        (m, coeff), = monomial.items()
        if m[0] or m[1]:
            raise CertificateMismatch("log term is singular at xi = 0", residual=monomial.as_expr())
        value += c * sp.log(QQ.to_sympy(coeff))
    return sp.nsimplify(value)


def certify(form: ClosedFormF, R: XiIntegrand, max_steps: int = None) -> DerivativeCertificate:
    """Lift `form` along the w-recursion and check it integrates R exactly."""
    xi_ring = R.xi_ring
    parts = xi_ring.by_w_power(R.generic)
    top = max(parts, default=0)
    max_steps = max_steps if max_steps is not None else top + 3
    logs = _log_terms(form, xi_ring)
    phi = closed_form_to_xi(form, xi_ring)
    pieces = [phi]
    zero = xi_ring.ring.zero
    for i in range(max_steps + 1):
        current = pieces[i]
        d_current = xi_ring.partial(current)
        if i == 0 and logs:
            d_current = d_current + _log_derivative(logs, xi_ring)
        rhs = parts.get(i, zero) - d_current - current * xi_ring.X * i
        nxt = xi_ring.normalize(rhs * xi_ring.xi * xi_ring.S * QQ(1, i + 1))
        if not nxt and i >= top:
            logger.debug("  lift terminated after %d steps", i + 1)
            break
        pieces.append(nxt)
    else:
        residual = pieces[-1].as_expr(*xi_ring.symbols())
        raise CertificateMismatch(
            f"d/dxi F^({form.k}) does not reproduce R_{form.k}: the lift does not terminate",
            residual=residual)
    boundary = _boundary_value(pieces, logs, xi_ring)
    if boundary != 0:
        raise CertificateMismatch(f"F^({form.k}) misses the xi = 0 boundary value {boundary}",
                                  residual=boundary)
    return DerivativeCertificate(form.k, pieces, logs, boundary, xi_ring)


@lru_cache(maxsize=None)
def _integrands(kmax: int) -> Tuple[XiIntegrand, ...]:
    return tuple(generic_integrands(kmax))


def verify_total_derivative(k: int) -> DerivativeCertificate:
    """
    Certificate that d/dxi of the generic closed form F^(k) equals R_k on the
    constraint surface, with the antiderivative vanishing at xi = 0.
    """
    if k < 1 or k > MAX_GENUS:
        raise UnsupportedOrderError(f"certificates exist for 1 <= k <= {MAX_GENUS}, got k={k}")
    logger.info("Certifying F^(%d) as an antiderivative of R_%d...", k, k)
    R = _integrands(k)[k - 1]
    certificate = certify(generic_closed_form(k), R)
    logger.info("  F^(%d) certified (%d lift pieces)", k, len(certificate.pieces))
    return certificate


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    print("=" * 60)
    print("Total-derivative certificates")
    print("=" * 60)
    for k in range(1, 3):
        cert = verify_total_derivative(k)
        print(f"  k={k}: holds={cert.holds}, pieces={len(cert.pieces)}")
        for i, piece in enumerate(cert.pieces):
            print(f"    Phi_{i} = {piece.as_expr()}")
