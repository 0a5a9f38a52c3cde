"""
Descriptors for the four X1 families (Laguerre types I, II, III and Jacobi).

Each descriptor carries the data of the natural-gauge operator

    p y'' + (p'/2 + s - 2 p eta'/eta) y' + (p eta''/eta + (p'/2 - s) eta'/eta) y

with all parameter shifts already applied, together with the weight, the
exceptional root ``xi`` (the root of ``eta``) and the coefficients needed by
the moment recursion and the determinantal matrix.  Laguerre families use
``p(x) = -x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .poly import Polynomial, divide_exact, jacobi_poly, laguerre_poly, to_shifted
from .specfun import gamma

__all__ = [
    "Kind",
    "FamilyDescriptor",
    "ParameterError",
    "DegreeError",
    "make_family",
    "s_via_factorization",
    "norm_Kn",
    "natural_operator_coeffs",
    "NaturalOperator",
    "admissible_degrees",
]


class Kind(str, enum.Enum):
    LAG1 = "lag1"
    LAG2 = "lag2"
    LAG3 = "lag3"
    JACOBI = "jacobi"

    @property
    def is_laguerre(self):
        return self is not Kind.JACOBI


class ParameterError(ValueError):
    """A family parameter lies outside the range where the weight is admissible."""


class DegreeError(ValueError):
    """The requested degree is one of the family's missing degrees."""


@dataclass(frozen=True)
class FamilyDescriptor:
    kind: Kind
    alpha: float
    beta: Optional[float]
    p: Polynomial
    q: Polynomial
    eta: Polynomial
    s: Polynomial
    b: Polynomial
    xi: float
    interval: Tuple[float, float]
    # weight = prod (x - root)**exponent * exp(exp_poly(x)) * weight_scale
    weight_factors: Tuple[Tuple[float, float], ...]
    exp_poly: Polynomial
    weight_scale: float
    r: Tuple[float, float, float]
    s_coeffs: Tuple[float, float, float]  # (s_{-1}, s_0, s_1)
    c1: Tuple[float, float]
    # data before the parameter shift, consumed by s_via_factorization
    pre_alpha: float
    pre_beta: Optional[float]
    pre_q: Polynomial
    pre_eta: Polynomial
    pre_b: Polynomial
    pre_shift: Tuple[float, float]
    name: str = field(default="")

    @property
    def params(self) -> dict:
        out = {"alpha": self.alpha}
        if self.beta is not None:
            out["beta"] = self.beta
        return out

    @property
    def missing_degree(self) -> int:
        return 1 if self.kind is Kind.LAG3 else 0

    def weight(self, x):
        """The weight at ``x`` (array-friendly)."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.interval
        return self.weight_from_distances(x, x - lo, hi - x)

    def weight_from_distances(self, x, dl, dr):
        """Weight evaluated with exact endpoint distances ``x - lo`` and ``hi - x``."""
        x = np.asarray(x, dtype=float)
        if self.kind.is_laguerre:
            return dl**self.alpha * np.exp(-x) / (x - self.xi) ** 2
        return self.weight_scale * dr**self.alpha * dl**self.beta / (x - self.xi) ** 2

    def e_row(self) -> Tuple[float, float]:
        """``(e0, e1)`` with e0 = p eta'' + p' eta'/2 - s eta' and e1 = 2 p eta', at xi."""
        xi = self.xi
        p, eta, s = self.p, self.eta, self.s
        e0 = p(xi) * eta.deriv(2)(xi) + 0.5 * p.deriv()(xi) * eta.deriv()(xi) - s(xi) * eta.deriv()(xi)
        e1 = 2.0 * p(xi) * eta.deriv()(xi)
        return float(e0), float(e1)


def admissible_degrees(family: FamilyDescriptor, max_n: int):
    return [n for n in range(0, max_n + 1) if n != family.missing_degree]


def _laguerre_p_q(alpha):
    return Polynomial((0.0, -1.0)), Polynomial((-alpha - 1.0, 1.0))


def _jacobi_p_q(alpha, beta):
    return Polynomial((1.0, 0.0, -1.0)), Polynomial((beta - alpha, -(alpha + beta + 2.0)))


def _laguerre_data(kind, alpha):
    """(pre_alpha, pre_eta, pre_b, eta, b) for a Laguerre type at post-shift alpha."""
    x = Polynomial((0.0, 1.0))
    if kind is Kind.LAG1:
        a0 = alpha - 1.0  # substituted as alpha -> alpha - 1
        pre_eta = laguerre_poly(1, a0).scale_argument(-1.0)
        pre_b = pre_eta
        eta = laguerre_poly(1, alpha - 1.0).scale_argument(-1.0)
        b = eta
    elif kind is Kind.LAG2:
        a0 = alpha + 1.0  # substituted as alpha -> alpha + 1
        pre_eta = laguerre_poly(1, -a0)
        pre_b = x * pre_eta
        eta = laguerre_poly(1, -alpha - 1.0)
        b = x * eta
    else:
        a0 = alpha + 1.0
        pre_eta = laguerre_poly(1, -a0).scale_argument(-1.0)
        pre_b = x * pre_eta
        eta = laguerre_poly(1, -alpha - 1.0).scale_argument(-1.0)
        b = x * eta
    return a0, pre_eta, pre_b, eta, b


def make_family(kind, alpha: float, beta: Optional[float] = None) -> FamilyDescriptor:
    """Build the descriptor of an X1 family.

    Laguerre types I and II need ``alpha > 0``, type III ``-1 < alpha < 0``.
    Jacobi needs ``alpha, beta > -1``, ``alpha != beta`` and
    ``sign(alpha) == sign(beta)`` (non-zero), which keeps ``|xi| > 1``.
    """
    kind = Kind(kind)
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ParameterError("alpha must be finite")

    if kind.is_laguerre:
        if beta is not None:
            raise ParameterError("beta is only meaningful for the Jacobi family")
        if kind in (Kind.LAG1, Kind.LAG2) and not alpha > 0:
            raise ParameterError(f"{kind.value} requires alpha > 0, got {alpha}")
        if kind is Kind.LAG3 and not -1.0 < alpha < 0.0:
            raise ParameterError(f"lag3 requires -1 < alpha < 0, got {alpha}")
        p, q = _laguerre_p_q(alpha)
        a0, pre_eta, pre_b, eta, b = _laguerre_data(kind, alpha)
        _, pre_q = _laguerre_p_q(a0)
        xi = -eta.coeffs[0] / eta.coeffs[1]
        s = Polynomial((-alpha - 0.5, 1.0))
        c1 = (1.0, 0.0) if kind is Kind.LAG3 else (1.0, 1.0)
        return _finish(
            kind, alpha, None, p, q, eta, s, b, xi, (0.0, math.inf),
            ((0.0, alpha), (xi, -2.0)), Polynomial((0.0, -1.0)), 1.0, c1,
            a0, None, pre_q, pre_eta, pre_b, (alpha - a0, 0.0),
        )

    if beta is None:
        raise ParameterError("the Jacobi family needs beta")
    beta = float(beta)
    if not (alpha > -1.0 and beta > -1.0):
        raise ParameterError(f"jacobi requires alpha, beta > -1, got ({alpha}, {beta})")
    if alpha == beta:
        raise ParameterError("jacobi requires alpha != beta (the exceptional root is at infinity)")
    if alpha == 0.0 or beta == 0.0 or (alpha > 0) != (beta > 0):
        raise ParameterError(f"jacobi requires sign(alpha) == sign(beta), both non-zero, got ({alpha}, {beta})")
    p, q = _jacobi_p_q(alpha, beta)
    a0, b0 = alpha + 1.0, beta - 1.0  # substituted as alpha -> alpha + 1, beta -> beta - 1
    _, pre_q = _jacobi_p_q(a0, b0)
    one_minus_x = Polynomial((1.0, -1.0))
    pre_eta = jacobi_poly(1, -a0, b0)
    pre_b = one_minus_x * pre_eta
    eta = jacobi_poly(1, -alpha - 1.0, beta - 1.0)
    b = one_minus_x * eta
    xi = (alpha + beta) / (beta - alpha)
    s = Polynomial((beta - alpha, -(alpha + beta + 1.0)))
    # first flag element from the exceptional condition, scaled so c_{1,1} = 1/2
    c1 = (1.0 / (alpha - beta), 0.5)
    return _finish(
        kind, alpha, beta, p, q, eta, s, b, xi, (-1.0, 1.0),
        ((1.0, alpha), (-1.0, beta), (xi, -2.0)), Polynomial(), 4.0 / (beta - alpha) ** 2, c1,
        a0, b0, pre_q, pre_eta, pre_b, (alpha - a0, beta - b0),
    )


def _finish(kind, alpha, beta, p, q, eta, s, b, xi, interval, factors, exp_poly, wscale, c1,
            a0, b0, pre_q, pre_eta, pre_b, shift):
    r = tuple(float(v) for v in to_shifted(p, xi).array(3))
    s_coeffs = _pearson_a1(p, xi, factors, exp_poly)
    return FamilyDescriptor(
        kind=kind, alpha=alpha, beta=beta, p=p, q=q, eta=eta, s=s, b=b, xi=float(xi),
        interval=interval, weight_factors=factors, exp_poly=exp_poly, weight_scale=wscale,
        r=r, s_coeffs=s_coeffs, c1=c1, pre_alpha=a0, pre_beta=b0, pre_q=pre_q,
        pre_eta=pre_eta, pre_b=pre_b, pre_shift=shift,
        name=kind.value,
    )


def _pearson_a1(p, xi, factors, exp_poly):
    """Expand ``a1 = p' + p W'/W`` as ``s_{-1}/(x-xi) + s_0 + s_1 (x-xi)``.

    ``W'/W = sum e_j/(x - z_j) + g'``.  Each ``p/(x - z_j)`` is a polynomial
    when ``z_j`` is a root of ``p``; the ``z_j = xi`` term leaves the simple
    pole whose residue is ``s_{-1}``.
    """
    a1 = p.deriv() + p * exp_poly.deriv()
    residue = 0.0
    for root, exponent in factors:
        quotient, remainder = p.divmod(Polynomial((-root, 1.0)))
        a1 = a1 + exponent * quotient
        rem = remainder(0.0) if not remainder.is_zero() else 0.0
        if root == xi:
            residue += exponent * rem
        elif abs(rem) > 1e-12 * (p.norm() or 1.0):
            raise ArithmeticError("weight factor is not cancelled by p")
    shifted = to_shifted(a1, xi).array(2)
    if a1.degree > 1:
        raise ArithmeticError("first-order Pearson coefficient has degree above one")
    return (float(residue), float(shifted[0]), float(shifted[1]))


def s_via_factorization(family: FamilyDescriptor, rtol: float = 1e-10, return_remainder: bool = False):
    """Recompute ``s`` from ``q + p'/2 + 2 p (eta'/eta - b'/b)`` with pre-shift data.

    The rational term is reduced by exact division; a remainder above
    ``rtol`` (relative) raises ``ArithmeticError``.  Because the pre-shift
    data is built at the shifted-back parameters, the quotient is already
    expressed in the family's own ``alpha`` (and ``beta``).

    With ``return_remainder=True`` the relative division remainder is
    returned as well.
    """
    s, rel = _s_with_remainder(family, rtol)
    return (s, rel) if return_remainder else s


def _s_with_remainder(family, rtol=1e-10):
    p = family.p
    eta, b = family.pre_eta, family.pre_b
    numerator = 2.0 * p * (eta.deriv() * b - b.deriv() * eta)
    denominator = eta * b
    quotient, rel = divide_exact(numerator, denominator, rtol)
    return family.pre_q + 0.5 * p.deriv() + quotient, rel


def norm_Kn(family: FamilyDescriptor, n: int) -> float:
    """Squared norm of the degree-``n`` polynomial in the standard normalization."""
    n = int(n)
    a, b = family.alpha, family.beta
    if n < 0 or n == family.missing_degree:
        raise DegreeError(f"degree {n} is not admissible for {family.kind.value}")
    if family.kind is Kind.LAG1:
        return (a + n) * gamma(a + n - 1) / math.factorial(n - 1)
    if family.kind is Kind.LAG2:
        return (a + n - 1) * gamma(a + n + 1) / math.factorial(n - 1)
    if family.kind is Kind.LAG3:
        if n == 0:
            return gamma(a + 1) * gamma(-a) / gamma(1 - a)
        return n * gamma(n + a) / math.factorial(n - 2)
    num = 2.0 ** (a + b + 1) * (a + n) * (b + n) * gamma(a + n) * gamma(b + n)
    den = 4.0 * (a + n - 1) * (b + n - 1) * (a + b + 2 * n - 1) * gamma(n) * gamma(a + b + n)
    return num / den


@dataclass(frozen=True)
class NaturalOperator:
    """Coefficients of the natural-gauge operator as numerator/denominator pairs.

    ``order1 = order1_poly + order1_num / eta`` and
    ``order0 = order0_num / eta`` (``eta''`` is kept for generality).
    """

    order2: Polynomial
    order1_poly: Polynomial
    order1_num: Polynomial
    order0_num: Polynomial
    denominator: Polynomial

    def apply_numerator(self, y: Polynomial):
        """Return ``(polynomial part, numerator over eta)`` of T[y]."""
        poly = self.order2 * y.deriv(2) + self.order1_poly * y.deriv()
        num = self.order1_num * y.deriv() + self.order0_num * y
        return poly, num


def natural_operator_coeffs(family: FamilyDescriptor) -> NaturalOperator:
    p, s, eta = family.p, family.s, family.eta
    return NaturalOperator(
        order2=p,
        order1_poly=0.5 * p.deriv() + s,
        order1_num=-2.0 * p * eta.deriv(),
        order0_num=p * eta.deriv(2) + (0.5 * p.deriv() - s) * eta.deriv(),
        denominator=eta,
    )
