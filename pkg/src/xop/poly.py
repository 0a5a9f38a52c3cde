"""
Dense real polynomials in the monomial basis and in a shifted basis
``(x - center)**i``, plus classical Laguerre and Jacobi polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as _P

__all__ = [
    "Polynomial",
    "ShiftedPolynomial",
    "ZeroDivisorError",
    "laguerre_eval",
    "jacobi_eval",
    "laguerre_poly",
    "jacobi_poly",
    "to_monomial",
    "to_shifted",
    "divide_exact",
]


class ZeroDivisorError(ZeroDivisionError):
    pass


def _trim(coeffs):
    c = [float(v) for v in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``sum(coeffs[i] * x**i)``.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``
    and ``degree == -1``.
    """

    coeffs: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def linear(cls, c0, c1):
        return cls((c0, c1))

    @classmethod
    def from_roots(cls, *roots):
        p = cls((1.0,))
        for r in roots:
            p = p * cls((-r, 1.0))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def is_zero(self) -> bool:
        return not self.coeffs

    def array(self, size=None) -> np.ndarray:
        n = len(self.coeffs) if size is None else size
        out = np.zeros(n)
        out[: len(self.coeffs)] = self.coeffs[:n]
        return out

    def norm(self) -> float:
        """Max-norm of the coefficient vector."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __call__(self, x):
        if not self.coeffs:
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        # Horner
        result = self.coeffs[-1] * np.ones_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs[:-1]):
            result = result * x + c
        return float(result) if np.ndim(result) == 0 else result

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.array(n) + other.array(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        return Polynomial(_P.polymul(self.array(), other.array()))

    __rmul__ = __mul__

    def deriv(self, m=1) -> "Polynomial":
        if self.degree < m:
            return Polynomial()
        return Polynomial(_P.polyder(self.array(), m))

    def divmod(self, divisor: "Polynomial"):
        """Return ``(quotient, remainder)`` with ``deg(remainder) < deg(divisor)``."""
        divisor = _coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisorError("division by the zero polynomial")
        if self.degree < divisor.degree:
            return Polynomial(), self
        q, r = _P.polydiv(self.array(), divisor.array())
        r = np.asarray(r)[: max(divisor.degree, 0)] if divisor.degree > 0 else ()
        return Polynomial(q), Polynomial(r)

    def scale_argument(self, a) -> "Polynomial":
        """The polynomial ``x -> p(a * x)``."""
        return Polynomial(tuple(c * a**i for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


def _coerce(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial((float(value),))


def divide_exact(numerator: Polynomial, denominator: Polynomial, rtol=1e-10):
    """Divide and check that the remainder is negligible.

    Returns ``(quotient, relative_remainder)``; the remainder is measured in
    coefficient max-norm relative to the dividend.  Raises ``ArithmeticError``
    when it exceeds ``rtol``.
    """
    q, r = numerator.divmod(denominator)
    scale = numerator.norm() or 1.0
    rel = r.norm() / scale
    if rel > rtol:
        raise ArithmeticError(f"division leaves a remainder of relative size {rel:.3e}")
    return q, rel


@dataclass(frozen=True)
class ShiftedPolynomial:
    """Polynomial ``sum(coeffs[i] * (x - center)**i)``."""

    center: float
    coeffs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        t = np.asarray(x, dtype=float) - self.center
        result = np.zeros_like(t)
        for c in reversed(self.coeffs):
            result = result * t + c
        return float(result) if np.ndim(result) == 0 else result

    def scaled(self, factor) -> "ShiftedPolynomial":
        return ShiftedPolynomial(self.center, tuple(factor * c for c in self.coeffs))

    def to_monomial(self) -> Polynomial:
        return to_monomial(self)

    def array(self, size=None) -> np.ndarray:
        n = len(self.coeffs) if size is None else size
        out = np.zeros(n)
        out[: len(self.coeffs)] = self.coeffs[:n]
        return out


def to_monomial(sp: ShiftedPolynomial) -> Polynomial:
    """Expand ``sum c_i (x - xi)^i`` binomially into monomial coefficients."""
    n = len(sp.coeffs)
    out = [0.0] * n
    for i, c in enumerate(sp.coeffs):
        for j in range(i + 1):
            out[j] += c * comb(i, j) * (-sp.center) ** (i - j)
    return Polynomial(out)


def to_shifted(p: Polynomial, xi: float) -> ShiftedPolynomial:
    """Taylor coefficients of ``p`` about ``xi`` (repeated synthetic division)."""
    c = list(p.coeffs)
    n = len(c)
    for k in range(n):
        for j in range(n - 2, k - 1, -1):
            c[j] += xi * c[j + 1]
    return ShiftedPolynomial(xi, c)


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n}")
    return int(n)


def laguerre_eval(n: int, alpha: float, x):
    """Generalized Laguerre ``L_n^alpha(x)`` by the three-term recurrence."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if x.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if x.ndim else float(cur)


def jacobi_eval(n: int, alpha: float, beta: float, x):
    """Jacobi ``P_n^(alpha, beta)(x)`` by the three-term recurrence."""
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if x.ndim else float(prev)
    cur = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x
    for k in range(1, n):
        a1, a2, a3, a4 = _jacobi_rec(k, alpha, beta)
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
    return cur if x.ndim else float(cur)


def _jacobi_rec(k, a, b):
    # P_{k+1} from P_k, P_{k-1}
    s = 2 * k + a + b
    a1 = 2 * (k + 1) * (k + a + b + 1) * s
    a2 = (s + 1) * (a * a - b * b)
    a3 = s * (s + 1) * (s + 2)
    a4 = 2 * (k + a) * (k + b) * (s + 2)
    return a1, a2, a3, a4


def laguerre_poly(n: int, alpha: float) -> Polynomial:
    """Coefficients of ``L_n^alpha`` from the same recurrence."""
    n = _check_degree(n)
    x = Polynomial((0.0, 1.0))
    prev = Polynomial((1.0,))
    if n == 0:
        return prev
    cur = Polynomial((1.0 + alpha, -1.0))
    for k in range(1, n):
        prev, cur = cur, (((2 * k + 1 + alpha) - x) * cur - (k + alpha) * prev) * (1.0 / (k + 1))
    return cur


def jacobi_poly(n: int, alpha: float, beta: float) -> Polynomial:
    """Coefficients of ``P_n^(alpha, beta)``."""
    n = _check_degree(n)
    x = Polynomial((0.0, 1.0))
    prev = Polynomial((1.0,))
    if n == 0:
        return prev
    cur = Polynomial((0.5 * (alpha - beta), 0.5 * (alpha + beta + 2.0)))
    for k in range(1, n):
        a1, a2, a3, a4 = _jacobi_rec(k, alpha, beta)
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) * (1.0 / a1)
    return cur
