"""
Special functions and the quadrature engine used for every moment oracle.

The quadrature is double-exponential: tanh-sinh on bounded intervals and
either a rational map ``x = a + t/(1-t)`` (then tanh-sinh on ``(0, 1)``) or
exp-sinh on half-infinite ones.  Nodes are built together with their exact
distances to both endpoints, so integrands with algebraic endpoint
singularities can be evaluated without cancellation (see
``QuadratureSpec.endpoint``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Tuple

import numpy as np
from scipy import special as _sp

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "PoleError",
    "DomainError",
    "integrate",
    "gamma",
    "upper_incomplete_gamma",
    "lower_incomplete_gamma",
    "exp_integral_Ea",
    "appell_f1",
]

_HALF_PI = 0.5 * math.pi
# |s| beyond which tanh(s) is 1 to the last bit of the complement we track
_S_MAX = 350.0
# nodes this far from the finite endpoint lie in the decayed tail of any
# integrand the engine is meant for
_FAR_TAIL = 1e30


class QuadratureError(ArithmeticError):
    """Raised when refinement stops before the requested tolerance is met.

    The best available estimate is kept on the exception.
    """

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


class PoleError(ValueError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and transform choices for :func:`integrate`.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Convergence is declared when successive levels differ by less than
        ``max(abs_tol, rel_tol * |value|)``.
    max_depth : int
        Number of step halvings after the initial level.
    endpoint : {"none", "algebraic-endpoint"}
        With ``"algebraic-endpoint"`` the integrand is called as
        ``f(x, dl, dr)`` where ``dl = x - a`` and ``dr = b - x`` are computed
        directly from the node construction (``dr`` is ``inf`` on
        half-infinite domains).  Otherwise it is called as ``f(x)``.
    infinite : {"rational", "exponential"}
        Transform used for ``(a, inf)``.
    extended : bool
        Accumulate the weighted sum exactly (rational arithmetic) instead
        of with ``math.fsum``.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_depth: int = 8
    endpoint: str = "none"
    infinite: str = "rational"
    extended: bool = False

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be strictly positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.endpoint not in ("none", "algebraic-endpoint"):
            raise ValueError(f"unknown endpoint mode {self.endpoint!r}")
        if self.infinite not in ("rational", "exponential"):
            raise ValueError(f"unknown infinite-domain mode {self.infinite!r}")


DEFAULT_SPEC = QuadratureSpec()
SINGULAR_SPEC = QuadratureSpec(endpoint="algebraic-endpoint")


def _tanh_sinh_unit(h, odd_only):
    """Nodes on (0, 1) as (t, 1 - t, weight), each computed without cancellation."""
    kmax = int(math.ceil(math.asinh(_S_MAX / _HALF_PI) / h))
    k = np.arange(-kmax, kmax + 1)
    if odd_only:
        k = k[k % 2 != 0]
    u = k * h
    s = _HALF_PI * np.sinh(u)
    e = np.exp(-2.0 * np.abs(s))
    small = e / (1.0 + e)          # distance from the near endpoint
    large = 1.0 / (1.0 + e)
    t = np.where(s < 0, small, large)
    tc = np.where(s < 0, large, small)
    # dt/du = (pi/2) cosh(u) / (2 cosh^2 s); 1/cosh^2 s = 4e/(1+e)^2
    w = h * _HALF_PI * np.cosh(u) * 2.0 * e / (1.0 + e) ** 2
    keep = (t > 0) & (tc > 0) & (w > 0)
    return t[keep], tc[keep], w[keep]


def _exp_sinh(h, odd_only):
    """Nodes on (0, inf) for the exp-sinh map x = exp((pi/2) sinh u)."""
    kmax = int(math.floor(math.asinh(700.0 / _HALF_PI) / h))
    k = np.arange(-kmax, kmax + 1)
    if odd_only:
        k = k[k % 2 != 0]
    u = k * h
    x = np.exp(_HALF_PI * np.sinh(u))
    w = h * _HALF_PI * np.cosh(u) * x
    keep = (x > 0) & np.isfinite(w) & (w > 0)
    return x[keep], w[keep]


def _level_nodes(a, b, h, odd_only, spec):
    """Map the level's base nodes to (x, dl, dr, weight) on the domain."""
    if math.isinf(b):
        if spec.infinite == "rational":
            t, tc, w = _tanh_sinh_unit(h, odd_only)
            with np.errstate(over="ignore", divide="ignore"):
                dl = t / tc
                w = w / (tc * tc)
            keep = np.isfinite(dl) & np.isfinite(w)
            dl, w = dl[keep], w[keep]
        else:
            dl, w = _exp_sinh(h, odd_only)
        x = a + dl
        dr = np.full_like(x, np.inf)
    else:
        t, tc, w = _tanh_sinh_unit(h, odd_only)
        width = b - a
        dl = width * t
        dr = width * tc
        # anchor each node at its nearer endpoint
        x = np.where(t <= 0.5, a + dl, b - dr)
        w = w * width
    return x, dl, dr, w


def _weighted_sum(f, nodes, spec):
    x, dl, dr, w = nodes
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        if spec.endpoint == "algebraic-endpoint":
            fx = np.asarray(f(x, dl, dr), dtype=float)
        else:
            fx = np.asarray(f(x), dtype=float)
        fx = np.broadcast_to(fx, x.shape)
        terms = np.where(fx == 0.0, 0.0, w * fx)
    # far-tail nodes of the infinite maps overflow (x**k * exp(-x) -> inf*0)
    terms = np.where(np.isfinite(terms) | (dl < _FAR_TAIL), terms, 0.0)
    if not np.all(np.isfinite(terms)):
        raise QuadratureError("integrand is not finite at a quadrature node", math.nan, math.inf)
    if spec.extended:
        return float(sum((Fraction(v) for v in terms.tolist()), Fraction(0)))
    return math.fsum(terms.tolist())


def integrate(
    f: Callable,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> Tuple[float, float]:
    """Integrate ``f`` over ``(a, b)`` with double-exponential quadrature.

    ``f`` must accept numpy arrays.  ``b`` may be ``inf``; ``a`` must be
    finite.  Returns ``(value, error_estimate)``; the estimate is the
    difference between the last two refinement levels, which overstates the
    true error of a converged double-exponential rule.
    """
    if math.isinf(a):
        raise DomainError("lower limit must be finite")
    if a == b:
        return 0.0, 0.0
    if b < a:
        value, err = integrate(f, b, a, spec)
        return -value, err

    h = 1.0
    prev = _weighted_sum(f, _level_nodes(a, b, h, False, spec), spec)
    value = prev
    err = math.inf
    for level in range(1, spec.max_depth + 1):
        h *= 0.5
        # new nodes sit at odd multiples of the halved step; old weights halve
        extra = _weighted_sum(f, _level_nodes(a, b, h, True, spec), spec)
        value = 0.5 * prev + extra
        err = abs(value - prev)
        if level >= 3 and err <= max(spec.abs_tol, spec.rel_tol * abs(value)):
            return value, err
        prev = value
    raise QuadratureError(
        f"no convergence after {spec.max_depth} refinements (estimate {value!r}, error {err!r})",
        value,
        err,
    )


def gamma(x: float) -> float:
    """Gamma function; raises :class:`PoleError` at non-positive integers."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}")
    return math.gamma(x)


def lower_incomplete_gamma(a: float, x: float) -> float:
    """``int_0^x t^(a-1) e^(-t) dt`` for ``a > 0``, ``x >= 0``."""
    if a <= 0:
        raise DomainError("lower incomplete gamma needs a > 0")
    if x < 0:
        raise DomainError("lower incomplete gamma needs x >= 0")
    return float(_sp.gammainc(a, x)) * gamma(a)


def upper_incomplete_gamma(a: float, x: float) -> float:
    """``Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt`` for ``x > 0`` and any real ``a``.

    For ``a > 0`` the regularized scipy value is rescaled; for ``a <= 0``
    the defining integral is evaluated directly after the shift ``t = x + u``.
    """
    a = float(a)
    x = float(x)
    if not x > 0:
        raise DomainError(f"upper incomplete gamma needs x > 0, got {x}")
    if a > 0:
        return float(_sp.gammaincc(a, x)) * gamma(a)

    def integrand(u):
        return np.exp(-u) * (1.0 + u / x) ** (a - 1.0)

    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_depth=10)
    value, _ = integrate(integrand, 0.0, math.inf, spec)
    return value * x ** (a - 1.0) * math.exp(-x)


def exp_integral_Ea(a: float, x: float) -> float:
    """Generalized exponential integral ``E_a(x) = int_1^inf e^(-x t) t^(-a) dt``."""
    a = float(a)
    x = float(x)
    if not x > 0:
        raise DomainError(f"E_a needs x > 0, got {x}")

    # t = 1 + u/x keeps the decay rate fixed at e^(-u)
    def integrand(u):
        return np.exp(-u) * (1.0 + u / x) ** (-a)

    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_depth=10)
    value, _ = integrate(integrand, 0.0, math.inf, spec)
    return value * math.exp(-x) / x


def appell_f1(a: float, b1: float, b2: float, c: float, x: float, y: float) -> float:
    """Appell ``F1`` from its one-dimensional Euler integral.

    Valid for ``c > a > 0`` and ``x, y < 1``.  The normalization uses
    ``Gamma(c) / (Gamma(a) Gamma(c - a))``.
    """
    if not a > 0:
        raise DomainError(f"Appell F1 integral needs a > 0, got a={a}")
    if not c > a:
        raise DomainError(f"Appell F1 integral needs c > a, got a={a}, c={c}")
    if not (x < 1 and y < 1):
        raise DomainError(f"Appell F1 integral needs x < 1 and y < 1, got x={x}, y={y}")
    if x == 0 and y == 0:
        return 1.0

    def integrand(t, dl, dr):
        return dl ** (a - 1.0) * dr ** (c - a - 1.0) * (1.0 - x * t) ** (-b1) * (1.0 - y * t) ** (-b2)

    value, _ = integrate(integrand, 0.0, 1.0, QuadratureSpec(rel_tol=1e-13, endpoint="algebraic-endpoint", max_depth=10))
    log_norm = math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a)
    sign = _gamma_sign(c) * _gamma_sign(a) * _gamma_sign(c - a)
    return sign * math.exp(log_norm) * value


def _gamma_sign(x):
    if x > 0:
        return 1.0
    return -1.0 if math.floor(x) % 2 else 1.0
