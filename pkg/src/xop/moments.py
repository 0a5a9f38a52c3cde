"""
Adjusted moments ``mu_k = int_I (x - xi)**k W(x) dx``.

Initial values come from closed forms (incomplete Gamma for the Laguerre
types, Appell F1 for Jacobi); higher moments follow from the three-term
relation obtained by integrating ``(x - xi)**K`` against ``(a2 W)' = a1 W``:

    (K r0 + s_{-1}) mu_{K-1} + (K r1 + s0) mu_K + (K r2 + s1) mu_{K+1} = 0,   K >= 1

where ``a2 = p = sum r_l (x-xi)**l`` and ``a1 = sum s_m (x-xi)**m``.
Direct quadrature of the definition is kept as an independent oracle.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .families import FamilyDescriptor, Kind
from .specfun import QuadratureSpec, appell_f1, gamma, integrate, upper_incomplete_gamma

__all__ = [
    "Source",
    "MomentTable",
    "MultiIndexMoment",
    "RecursionError_",
    "initial_moments",
    "generate_moments",
    "moment_by_quadrature",
    "integrate_against_weight",
    "quadrature_table",
    "x2_moment_quadrature",
    "jacobi_mu2",
    "jacobi_mu0_closed_form",
    "jacobi_J",
    "table_recursion_step",
    "pearson_recursion_step",
]

log = logging.getLogger(__name__)

MOMENT_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300, max_depth=10, endpoint="algebraic-endpoint")


class Source(str, enum.Enum):
    CLOSED_FORM = "initial-closed-form"
    RECURSION = "recursion"
    QUADRATURE = "quadrature"


class RecursionError_(ArithmeticError):
    """The recursion's leading coefficient vanishes or the values overflow."""


@dataclass(frozen=True)
class MomentTable:
    family: FamilyDescriptor
    values: Tuple[float, ...]
    sources: Tuple[Source, ...]
    errors: Tuple[Optional[float], ...]
    notes: Tuple[str, ...] = field(default=())
    # exact rational values behind ``values`` when the recursion produced them
    exact: Optional[Tuple[Fraction, ...]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.values):
            raise RecursionError_("moment table holds a non-finite entry")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def array(self) -> np.ndarray:
        return np.array(self.values)

    def exact_values(self) -> Tuple[Fraction, ...]:
        """Rational moments; the stored floats are converted exactly when no
        exact recursion values exist."""
        if self.exact is not None:
            return self.exact
        return tuple(Fraction(v) for v in self.values)

    def rows(self):
        """``(k, value, source, error_estimate)`` tuples, as written to CSV."""
        return [(k, v, s.value, e) for k, (v, s, e) in enumerate(zip(self.values, self.sources, self.errors))]


@dataclass(frozen=True)
class MultiIndexMoment:
    indices: Tuple[int, int]
    value: float


def jacobi_J(alpha: float, beta: float) -> Tuple[float, float]:
    """The two Appell-F1 integrals whose sum gives the Jacobi first moment."""
    s = alpha + beta
    J1 = -appell_f1(1.0, -beta, 1.0, alpha + 2.0, -1.0, (beta - alpha) / s) / ((alpha + 1.0) * s)
    J2 = -appell_f1(1.0, -alpha, 1.0, beta + 2.0, -1.0, (alpha - beta) / s) / ((beta + 1.0) * s)
    return J1, J2


def jacobi_mu2(alpha: float, beta: float) -> float:
    """``mu_2`` for Jacobi: ``4/(beta-alpha)^2 * int_{-1}^{1} (1-x)^alpha (1+x)^beta dx``."""
    beta_integral = 2.0 ** (alpha + beta + 1.0) * math.exp(
        math.lgamma(alpha + 1.0) + math.lgamma(beta + 1.0) - math.lgamma(alpha + beta + 2.0)
    )
    return 4.0 * beta_integral / (beta - alpha) ** 2


def jacobi_mu0_closed_form(alpha: float, beta: float) -> float:
    """The tabulated closed form for the Jacobi ``mu_0`` (kept for comparison only)."""
    J1, J2 = jacobi_J(alpha, beta)
    g = gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(alpha + beta + 2.0)
    return (alpha + beta) * g / (2.0 * alpha * beta) + (J1 + J2) * (2.0 * alpha * beta - alpha - beta) / (alpha * beta)


def _laguerre_mu1(alpha: float, xi: float) -> float:
    # int_0^inf x^alpha e^-x / (x - xi) dx with a = -xi > 0
    a = -xi
    return math.exp(a) * a**alpha * gamma(1.0 + alpha) * upper_incomplete_gamma(-alpha, a)


def initial_moments(family: FamilyDescriptor) -> Tuple[float, float]:
    """``(mu_0, mu_1)`` from closed forms.

    For Jacobi, ``mu_0`` is solved from the first recursion step using
    ``mu_1`` and the Beta-integral ``mu_2``; the tabulated closed form is
    compared against it and any disagreement is logged.
    """
    a = family.alpha
    if family.kind in (Kind.LAG1, Kind.LAG2):
        mu1 = _laguerre_mu1(a, family.xi)
        return gamma(a) - 2.0 * mu1, mu1
    if family.kind is Kind.LAG3:
        mu1 = _laguerre_mu1(a, family.xi)
        return -gamma(a + 1.0) / a, mu1
    b = family.beta
    J1, J2 = jacobi_J(a, b)
    mu1 = 4.0 / (b - a) * (J1 + J2)
    mu0 = _jacobi_mu0_from_recursion(family, mu1, jacobi_mu2(a, b))
    tabulated = jacobi_mu0_closed_form(a, b)
    if abs(tabulated - mu0) > 1e-6 * abs(mu0):
        log.info(
            "jacobi(%g, %g): tabulated mu_0 = %.12g disagrees with recursion value %.12g; using the latter",
            a, b, tabulated, mu0,
        )
    return mu0, mu1


def _jacobi_mu0_from_recursion(family, mu1, mu2):
    r0, r1, r2 = family.r
    sm1, s0, s1 = family.s_coeffs
    # K = 1: (r0 + s_{-1}) mu0 + (r1 + s0) mu1 + (r2 + s1) mu2 = 0
    return -((r1 + s0) * mu1 + (r2 + s1) * mu2) / (r0 + sm1)


def pearson_recursion_step(family: FamilyDescriptor, K: int, mu_prev: float, mu_cur: float) -> float:
    """``mu_{K+1}`` from ``mu_{K-1}`` and ``mu_K`` (K >= 1)."""
    r0, r1, r2 = family.r
    sm1, s0, s1 = family.s_coeffs
    lead = K * r2 + s1
    if lead == 0.0 or abs(lead) < 1e-14 * (abs(K * r1 + s0) + abs(K * r0 + sm1)):
        raise RecursionError_(f"leading coefficient K*r2 + s1 vanishes at K={K}")
    return -((K * r0 + sm1) * mu_prev + (K * r1 + s0) * mu_cur) / lead


def table_recursion_step(family: FamilyDescriptor, k: int, mu_k: float, mu_k1: float) -> float:
    """``mu_{k+2}`` from ``mu_k`` and ``mu_{k+1}`` using the family-specific
    tabulated formulas verbatim (k >= 0)."""
    a = family.alpha
    if family.kind in (Kind.LAG1, Kind.LAG2):
        return (2 * a + k) * mu_k1 + a * (1 - k) * mu_k
    if family.kind is Kind.LAG3:
        return k * mu_k1 - a * (1 - k) * mu_k
    b = family.beta
    xi = family.xi
    den = a + b + k
    return ((2 - a - b - 2 * k) * xi + b - a) / den * mu_k1 + (k - 2) * (1 - xi * xi) / den * mu_k


def generate_moments(family: FamilyDescriptor, N: int, variant: str = "pearson") -> MomentTable:
    """Moments ``mu_0 .. mu_{N-1}`` from the closed-form start and forward recursion.

    ``variant="pearson"`` uses the coefficients derived from the weight;
    ``variant="table"`` applies the tabulated family formula verbatim (used
    only to test which form the quadrature oracle supports).

    The Pearson recursion is run in exact rational arithmetic from the
    binary64 ``mu_0, mu_1``.  The resulting sequence satisfies every
    recursion relation exactly, so the functional it defines keeps the
    natural operator symmetric; rounding each moment independently would
    not, and the Hankel solves downstream amplify that inconsistency.
    """
    if N < 2:
        raise ValueError("need at least two moments")
    mu0, mu1 = initial_moments(family)
    exact = None
    if variant == "pearson":
        exact = _exact_recursion(family, mu0, mu1, N)
        values = [mu0, mu1] + [float(v) for v in exact[2:]]
    elif variant == "table":
        values = [mu0, mu1]
        for K in range(1, N - 1):
            values.append(table_recursion_step(family, K - 1, values[K - 1], values[K]))
    else:
        raise ValueError(f"unknown recursion variant {variant!r}")
    for K, v in enumerate(values):
        if not math.isfinite(v):
            raise RecursionError_(f"moment {K} overflowed")
    sources = (Source.CLOSED_FORM, Source.CLOSED_FORM) + (Source.RECURSION,) * (N - 2)
    return MomentTable(family, tuple(values), sources, (None,) * N, notes=(variant,), exact=exact)


def _exact_recursion(family, mu0, mu1, N):
    r0, r1, r2 = (Fraction(v) for v in family.r)
    sm1, s0, s1 = (Fraction(v) for v in family.s_coeffs)
    mu = [Fraction(mu0), Fraction(mu1)]
    for K in range(1, N - 1):
        lead = K * r2 + s1
        if lead == 0:
            raise RecursionError_(f"leading coefficient K*r2 + s1 vanishes at K={K}")
        mu.append(-((K * r0 + sm1) * mu[K - 1] + (K * r1 + s0) * mu[K]) / lead)
        if abs(mu[-1]) > 1e300:
            raise RecursionError_(f"moment {K + 1} overflowed")
    return tuple(mu)


# e^{-x} x^{alpha + 2n} is below 1e-300 relative to the bulk well before here
_LAGUERRE_CUTOFF = 1000.0


def integrate_against_weight(family: FamilyDescriptor, g: Callable, spec: QuadratureSpec = MOMENT_SPEC):
    """``int_I g(x) W(x) dx`` for a smooth ``g``; returns ``(value, error)``.

    Endpoint factors of the weight are evaluated from exact node-to-endpoint
    distances.  On ``(0, inf)`` nodes beyond ``_LAGUERRE_CUTOFF`` contribute
    zero (their weight underflows while ``g`` may overflow).
    """
    xi = family.xi
    lo, hi = family.interval

    if math.isinf(hi):
        alpha = family.alpha

        def tail(x, dl, dr):
            out = np.zeros_like(x)
            m = x < _LAGUERRE_CUTOFF
            xm = x[m]
            out[m] = g(xm) * dl[m] ** alpha * np.exp(-xm) / (xm - xi) ** 2
            return out

        return integrate(tail, lo, hi, spec)

    def integrand(x, dl, dr):
        return g(x) * family.weight_from_distances(x, dl, dr)

    # split at the midpoint so each endpoint singularity sits at a node cluster
    mid = 0.5 * (lo + hi)

    def left(x, dl, dr):
        return integrand(x, dl, hi - x)

    def right(x, dl, dr):
        return integrand(x, x - lo, dr)

    v1, e1 = integrate(left, lo, mid, spec)
    v2, e2 = integrate(right, mid, hi, spec)
    return v1 + v2, e1 + e2


def moment_by_quadrature(family: FamilyDescriptor, k: int, spec: QuadratureSpec = MOMENT_SPEC):
    """Direct quadrature of ``int_I (x - xi)**k W(x) dx``; returns ``(value, error)``."""
    if k < 0:
        raise ValueError("moment index must be non-negative")
    xi = family.xi
    return integrate_against_weight(family, lambda x: (x - xi) ** k, spec)


def quadrature_table(family: FamilyDescriptor, N: int, spec: QuadratureSpec = MOMENT_SPEC) -> MomentTable:
    vals, errs = zip(*(moment_by_quadrature(family, k, spec) for k in range(N)))
    return MomentTable(family, tuple(vals), (Source.QUADRATURE,) * N, tuple(errs))


def x2_moment_quadrature(
    weight: Callable,
    xi1: float,
    xi2: float,
    l1: int,
    l2: int,
    domain: Tuple[float, float],
    spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300, max_depth=10),
) -> MultiIndexMoment:
    """``int (x - xi1)**l1 (x - xi2)**l2 W(x) dx`` over ``domain``.

    ``weight`` is called with an array of abscissae.
    """
    if l1 < 0 or l2 < 0:
        raise ValueError("indices must be non-negative")

    def integrand(x):
        return (x - xi1) ** l1 * (x - xi2) ** l2 * weight(x)

    value, _ = integrate(integrand, domain[0], domain[1], spec)
    return MultiIndexMoment((l1, l2), value)
