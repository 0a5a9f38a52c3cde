"""
Cross-checks for the exceptional families: the exceptional condition and
flag structure, natural-operator eigen-residuals, orthogonality by direct
quadrature, the Darboux closed forms, and the two-root (X2) flag checks.

Every check is collected in a :class:`VerificationReport`.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .detrep import exceptional_polynomial
from .families import (
    DegreeError,
    FamilyDescriptor,
    Kind,
    ParameterError,
    admissible_degrees,
    natural_operator_coeffs,
    norm_Kn,
)
from .moments import (
    MOMENT_SPEC,
    generate_moments,
    integrate_against_weight,
    quadrature_table,
)
from .poly import Polynomial, jacobi_poly, laguerre_poly, to_shifted
from .specfun import QuadratureError, QuadratureSpec

__all__ = [
    "Check",
    "VerificationReport",
    "NonPolynomialImageError",
    "ComplexRootsError",
    "exceptional_condition_value",
    "condition_scale",
    "flag_check",
    "x2_flag_check",
    "x2_typeI_data",
    "natural_operator_residual",
    "orthogonality_matrix",
    "darboux_typeIII",
    "darboux_jacobi_diagnostic",
    "one_minus_cos",
    "moment_oracle_check",
    "verify_family",
    "dumps",
]

PASS, FAIL, INFO = "pass", "fail", "informational"


class NonPolynomialImageError(ArithmeticError):
    """``T[y]`` is not a polynomial: ``y`` violates the exceptional condition."""


class ComplexRootsError(ValueError):
    pass


@dataclass
class Check:
    name: str
    anchor: str
    status: str
    residual: float
    tolerance: float
    note: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "paper_anchor": self.anchor,
            "status": self.status,
            "residual": abs(float(self.residual)),
            "tolerance": float(self.tolerance),
            "note": self.note,
        }


def _judge(name, anchor, residual, tol, note=""):
    status = PASS if residual <= tol else FAIL
    return Check(name, anchor, status, residual, tol, note)


@dataclass
class VerificationReport:
    family: str
    params: Dict[str, float]
    checks: List[Check] = field(default_factory=list)

    def add(self, *checks: Check):
        self.checks.extend(checks)

    @property
    def failed(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def passed(self) -> bool:
        return not self.failed

    def to_dict(self):
        return {
            "family": self.family,
            "params": dict(self.params),
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _fmt(value):
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return "%.17g" % v
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    return _fmt(obj) + "\n"


# -- exceptional condition ---------------------------------------------------


def _e_pair(eta: Polynomial, s: Polynomial, p: Polynomial, xi: float):
    e0 = p(xi) * eta.deriv(2)(xi) + 0.5 * p.deriv()(xi) * eta.deriv()(xi) - s(xi) * eta.deriv()(xi)
    e1 = 2.0 * p(xi) * eta.deriv()(xi)
    return float(e0), float(e1)


def exceptional_condition_value(family: FamilyDescriptor, y: Polynomial) -> float:
    """``[2 p eta' y' - (p eta'' + p' eta'/2 - s eta') y]`` at ``xi``."""
    e0, e1 = family.e_row()
    xi = family.xi
    return e1 * y.deriv()(xi) - e0 * y(xi)


def _scale_at(e0, e1, y, xi):
    coeffs = to_shifted(y, xi).coeffs
    return (abs(e0) + abs(e1)) * max((abs(c) for c in coeffs), default=0.0)


def condition_scale(family: FamilyDescriptor, y: Polynomial) -> float:
    """``(|e0| + |e1|)`` times the largest Taylor coefficient of ``y`` about ``xi``."""
    e0, e1 = family.e_row()
    return _scale_at(e0, e1, y, family.xi)


def _flag_polys(family, max_n):
    xi = family.xi
    if family.kind is Kind.LAG3:
        lowest = ("flag/lowest (constant 1)", Polynomial((1.0,)))
        excluded = ("exclusion/degree 1 (x - xi)", Polynomial((-xi, 1.0)))
    else:
        c10, c11 = family.c1
        lowest = ("flag/lowest (first exceptional polynomial)", Polynomial((c10 - c11 * xi, c11)))
        excluded = ("exclusion/degree 0 (constant 1)", Polynomial((1.0,)))
    members = [lowest] + [
        (f"flag/v{k:02d}", Polynomial.from_roots(*([xi] * k))) for k in range(2, max_n + 1)
    ]
    return members, excluded


def flag_check(family: FamilyDescriptor, max_n: int, tol: float = 1e-10, exclusion_floor: float = 1e-3) -> List[Check]:
    """Flag members satisfy the exceptional condition; the excluded degree does not.

    Members pass when ``|value| <= tol * scale``; the exclusion check passes
    when ``|value| >= exclusion_floor * scale`` and reports the ratio.
    """
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    anchor = "flag invariance; exceptional condition"
    out = []
    members, (ex_name, ex_poly) = _flag_polys(family, max_n)
    for name, y in members:
        ratio = abs(exceptional_condition_value(family, y)) / condition_scale(family, y)
        out.append(_judge(name, anchor, ratio, tol, "relative exceptional-condition value"))
    ratio = abs(exceptional_condition_value(family, ex_poly)) / condition_scale(family, ex_poly)
    status = PASS if ratio >= exclusion_floor else FAIL
    out.append(Check(ex_name, anchor, status, ratio, exclusion_floor,
                     "relative value must stay above the tolerance (degree is missing)"))
    return out


# -- X2 flags -----------------------------------------------------------------


def _quadratic_roots(eta: Polynomial):
    if eta.degree != 2:
        raise ValueError("eta must have degree 2")
    c0, c1, c2 = eta.coeffs
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0:
        raise ComplexRootsError(f"eta has complex roots (discriminant {disc:.6g})")
    if disc == 0:
        raise ValueError("eta has a double root")
    sq = math.sqrt(disc)
    # cancellation-free pair
    q = -0.5 * (c1 + math.copysign(sq, c1))
    return tuple(sorted((q / c2, c0 / q)))


def x2_typeI_data(alpha: float, convention: str = "shifted"):
    """``(eta, s, p, candidates)`` for the two-root Type I Laguerre flag.

    ``convention="shifted"`` takes ``eta = L_2^{alpha-1}(-x)``, the parameter
    shift used for the one-root Type I descriptor; ``"unshifted"`` takes
    ``eta = L_2^{alpha}(-x)``.  Candidates are keyed by name.
    """
    if convention == "shifted":
        eta = laguerre_poly(2, alpha - 1.0).scale_argument(-1.0)
    elif convention == "unshifted":
        eta = laguerre_poly(2, alpha).scale_argument(-1.0)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    p = Polynomial((0.0, -1.0))
    s = Polynomial((-alpha - 0.5, 1.0))
    x1, x2 = _quadratic_roots(eta)
    candidates = {
        "v2 = L_2^alpha(-x)": laguerre_poly(2, alpha).scale_argument(-1.0),
        "v3 = (x-xi1)^2 (x-xi2+1)": Polynomial.from_roots(x1, x1, x2 - 1.0),
        "v4 = (x-xi1)^2 (x-xi2)^2": Polynomial.from_roots(x1, x1, x2, x2),
    }
    return eta, s, p, candidates


def x2_flag_check(
    eta: Polynomial,
    s: Polynomial,
    p: Polynomial,
    candidates: Dict[str, Polynomial],
    tol: float = 1e-10,
) -> List[Check]:
    """Both exceptional conditions (one per root of ``eta``) for each candidate.

    A candidate passes iff the worse of its two relative values is within
    ``tol``.  Roots are ordered increasingly as ``xi1 < xi2``.
    """
    roots = _quadratic_roots(eta)
    out = []
    for name, y in candidates.items():
        worst = 0.0
        parts = []
        for xi in roots:
            e0, e1 = _e_pair(eta, s, p, xi)
            value = e1 * y.deriv()(xi) - e0 * y(xi)
            rel = abs(value) / _scale_at(e0, e1, y, xi)
            parts.append(f"{rel:.3g} at xi={xi:.17g}")
            worst = max(worst, rel)
        out.append(_judge(f"x2/{name}", "two-root exceptional conditions", worst, tol, "; ".join(parts)))
    return out


# -- natural operator ---------------------------------------------------------


def natural_operator_residual(family: FamilyDescriptor, y: Polynomial, rtol: float = 1e-9) -> Tuple[float, float]:
    """Eigenvalue and relative residual of ``y`` under the natural-gauge operator.

    ``T[y] = p y'' + (p'/2 + s) y' + N/eta`` with
    ``N = -2 p eta' y' + (p eta'' + (p'/2 - s) eta') y``.  The division must
    leave a remainder at most ``rtol`` relative to ``N``; otherwise ``y``
    violates the exceptional condition and ``NonPolynomialImageError`` is
    raised.  ``lambda`` matches leading coefficients (0 when ``T[y]`` drops
    degree) and the residual is ``||T[y] - lambda y|| / ||y||`` in the
    monomial max-norm.
    """
    if y.is_zero():
        raise ValueError("y must be nonzero")
    op = natural_operator_coeffs(family)
    poly, num = op.apply_numerator(y)
    quot, rem = num.divmod(op.denominator)
    scale = num.norm()
    if scale and rem.norm() > rtol * scale:
        raise NonPolynomialImageError(
            f"T[y] has a pole at xi (relative remainder {rem.norm() / scale:.3e})"
        )
    T = poly + quot
    lam = T.lead / y.lead if T.degree == y.degree else 0.0
    return lam, (T - lam * y).norm() / y.norm()


# -- orthogonality ------------------------------------------------------------


@dataclass(frozen=True)
class GramResult:
    degrees: Tuple[int, ...]
    gram: np.ndarray
    relative: np.ndarray
    norms_table: Tuple[float, ...]
    failures: Tuple[str, ...] = ()

    @property
    def max_offdiag(self) -> float:
        off = self.relative.copy()
        np.fill_diagonal(off, 0.0)
        return float(np.nanmax(np.abs(off))) if off.size else 0.0


def orthogonality_matrix(
    family: FamilyDescriptor,
    max_n: int,
    spec: QuadratureSpec = MOMENT_SPEC,
    polys: Optional[Dict[int, Polynomial]] = None,
) -> GramResult:
    """Gram matrix of the determinantal polynomials by direct quadrature.

    Off-diagonal entries are reported relative to ``sqrt(G_nn G_kk)``;
    entries whose quadrature fails are ``nan`` and listed in ``failures``.
    """
    degrees = tuple(admissible_degrees(family, max_n))
    if polys is None:
        moments = generate_moments(family, 2 * max_n + 2)
        polys = {n: exceptional_polynomial(family, n, moments).monomial() for n in degrees}
    m = len(degrees)
    G = np.full((m, m), np.nan)
    failures = []

    def entry(i, j, quad_spec):
        yn, yk = polys[degrees[i]], polys[degrees[j]]
        try:
            G[i, j], _ = integrate_against_weight(family, lambda x: yn(x) * yk(x), quad_spec)
        except QuadratureError as exc:
            failures.append(f"<{degrees[i]},{degrees[j]}>: {exc}")
        G[j, i] = G[i, j]

    for i in range(m):
        entry(i, i, spec)
    for i in range(m):
        for j in range(i + 1, m):
            # the target is zero, so convergence is judged against the diagonal scale
            scale = math.sqrt(abs(G[i, i] * G[j, j])) if np.isfinite(G[i, i] * G[j, j]) else 1.0
            entry(i, j, dataclasses.replace(spec, abs_tol=max(spec.rel_tol * scale, 1e-300)))
    d = np.sqrt(np.abs(np.diag(G)))
    rel = G / np.outer(d, d)
    return GramResult(degrees, G, rel, tuple(norm_Kn(family, n) for n in degrees), tuple(failures))


# -- Darboux closed forms -----------------------------------------------------


def darboux_typeIII(alpha: float, n: int) -> Polynomial:
    """Type III polynomial from the Darboux factor applied to a classical Laguerre.

    ``n = 0`` gives 1; ``n >= 2`` gives ``-A[L_{n-2}^{alpha+1}]`` with
    ``A[y] = x L_1^{-alpha-1}(-x) y' - 2 L_2^{-alpha-2}(-x) y``.
    """
    if n == 0:
        return Polynomial((1.0,))
    if n < 2:
        raise DegreeError(f"degree {n} is missing from the Type III sequence")
    x = Polynomial((0.0, 1.0))
    first = laguerre_poly(1, -alpha - 1.0).scale_argument(-1.0)
    second = laguerre_poly(2, -alpha - 2.0).scale_argument(-1.0)
    y = laguerre_poly(n - 2, alpha + 1.0)
    return -(x * first * y.deriv() - 2.0 * second * y)


def darboux_jacobi_diagnostic(alpha: float, beta: float, n: int, tol: float = 1e-8):
    """The displayed Jacobi Darboux formula, evaluated as written.

    Returns ``(poly, proportional)`` where ``poly`` is
    ``A[P_j^{(alpha+1, beta-1)}] / (alpha + 1 + j)`` with ``j = n - 1`` and
    ``A[y] = P_1^{(-alpha-1, beta-1)} ((1 - x) y' - alpha y)``, and
    ``proportional`` says whether it is parallel to the determinantal
    output within ``tol``.  The factor ``P_1^{(-alpha-1, beta-1)}`` vanishes
    at ``xi``.
    """
    from .families import make_family

    if n < 1:
        raise DegreeError("the diagnostic needs n >= 1")
    j = n - 1
    one_minus_x = Polynomial((1.0, -1.0))
    eta = jacobi_poly(1, -alpha - 1.0, beta - 1.0)
    y = jacobi_poly(j, alpha + 1.0, beta - 1.0)
    poly = eta * (one_minus_x * y.deriv() - alpha * y) * (1.0 / (alpha + 1.0 + j))
    det = exceptional_polynomial(make_family(Kind.JACOBI, alpha, beta), n).monomial()
    return poly, bool(one_minus_cos(poly, det) <= tol)


def one_minus_cos(p: Polynomial, q: Polynomial) -> float:
    """``1 - |cos|`` of the angle between monomial coefficient vectors."""
    size = max(len(p.coeffs), len(q.coeffs))
    a, b = p.array(size), q.array(size)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 1.0
    return max(0.0, 1.0 - abs(float(a @ b)) / (na * nb))


# -- moments ------------------------------------------------------------------


def moment_oracle_check(
    family: FamilyDescriptor, kmax: int = 12, tol: float = 1e-8, spec: QuadratureSpec = MOMENT_SPEC
) -> List[Check]:
    """Recursion against quadrature for ``0 <= k <= kmax``; also reports how the
    tabulated family recursion fares against the same oracle."""
    N = kmax + 1
    quad = quadrature_table(family, N, spec)
    rec = generate_moments(family, N)
    tab = generate_moments(family, N, variant="table")

    def worst(table):
        return max(abs(table[k] - quad[k]) / (1.0 + abs(quad[k])) for k in range(N))

    w_rec, w_tab = worst(rec), worst(tab)
    if w_tab <= tol:
        verdict = "oracle validates the tabulated recursion as well"
    else:
        verdict = f"oracle rejects the tabulated recursion (error {w_tab:.3g}); Pearson-derived variant selected"
    return [
        _judge("moments/oracle", "moment recursion; adjusted-moment definition", w_rec, tol,
               f"Pearson-derived recursion vs quadrature, k <= {kmax}; {verdict}"),
        Check("moments/tabulated-variant", "moment recursion table", INFO, w_tab, tol,
              "tabulated family recursion vs quadrature"),
    ]


# -- full report --------------------------------------------------------------


def verify_family(
    family: FamilyDescriptor,
    max_n: int = 6,
    x2: bool = False,
    tol: Optional[float] = None,
    spec: QuadratureSpec = MOMENT_SPEC,
) -> VerificationReport:
    """Run every applicable check for ``family`` up to degree ``max_n``.

    ``tol`` overrides the eigen-residual and exceptional-condition
    tolerances (default 1e-9); ``spec`` drives every quadrature.
    """
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    tol = 1e-9 if tol is None else tol
    report = VerificationReport(family.kind.value, family.params)
    moments = generate_moments(family, 2 * max_n + 2)
    degrees = admissible_degrees(family, max_n)
    results = {n: exceptional_polynomial(family, n, moments) for n in degrees}
    polys = {n: r.monomial() for n, r in results.items()}

    report.add(*moment_oracle_check(family, spec=spec))
    report.add(*flag_check(family, max_n))

    lams = []
    for n in degrees:
        y = polys[n]
        val = abs(exceptional_condition_value(family, y)) / condition_scale(family, y)
        report.add(_judge(f"condition/n={n:02d}", "exceptional condition", val, tol,
                          f"condition estimate {results[n].condition:.3g}"
                          + (" (flagged)" if results[n].flagged else "")))
        try:
            lam, res = natural_operator_residual(family, y)
        except NonPolynomialImageError as exc:
            report.add(Check(f"eigen/n={n:02d}", "natural-gauge operator", FAIL, math.inf, tol, str(exc)))
            continue
        lams.append(lam)
        report.add(_judge(f"eigen/n={n:02d}", "natural-gauge operator", res, tol, f"lambda = {lam:.17g}"))
    if len(lams) > 1:
        diffs = np.diff(lams)
        mono = bool(np.all(diffs > 0) or np.all(diffs < 0))
        report.add(Check("eigen/monotone", "natural-gauge operator", INFO, 0.0 if mono else 1.0, 0.0,
                         "eigenvalues strictly monotone in n" if mono else "eigenvalues NOT monotone in n"))

    gram = orthogonality_matrix(family, max_n, spec, polys=polys)
    note = "max |G_nk| / sqrt(G_nn G_kk) over n != k"
    if gram.failures:
        report.add(Check("orthogonality/offdiag", "orthogonality relation", FAIL, math.inf, 1e-8,
                         "; ".join(gram.failures)))
    else:
        report.add(_judge("orthogonality/offdiag", "orthogonality relation", gram.max_offdiag, 1e-8, note))
    for i, n in enumerate(gram.degrees):
        G = gram.gram[i, i]
        K = gram.norms_table[i]
        report.add(Check(f"orthogonality/norm n={n:02d}", "norm table", INFO, abs(G - K) / abs(K), 0.0,
                         f"<y,y> = {G:.17g}; tabulated K_n = {K:.17g}"))

    if family.kind is Kind.LAG3:
        for n in [k for k in (0, 2, 3, 4, 5) if k <= max_n]:
            d = one_minus_cos(darboux_typeIII(family.alpha, n), polys[n])
            report.add(_judge(f"darboux/n={n:02d}", "Type III Darboux formula", d, 1e-8, "1 - |cos| vs determinantal"))
    if family.kind is Kind.JACOBI:
        for n in range(1, max_n + 1):
            poly, prop = darboux_jacobi_diagnostic(family.alpha, family.beta, n)
            report.add(Check(f"darboux-diagnostic/n={n:02d}", "Jacobi Darboux formula", INFO,
                             one_minus_cos(poly, polys[n]), 1e-8,
                             "proportional to determinantal output" if prop else
                             f"not proportional; displayed formula vanishes at xi (value {poly(family.xi):.3g})"))

    if x2:
        if family.kind is not Kind.LAG1:
            raise ParameterError("the two-root flag check is defined for lag1 only")
        eta, s, p, cands = x2_typeI_data(family.alpha)
        report.add(*x2_flag_check(eta, s, p, cands))
        ctrl = x2_flag_check(eta, s, p, {"control y = x": Polynomial((0.0, 1.0))})[0]
        ctrl.status = PASS if ctrl.status == FAIL else FAIL
        ctrl.note = "negative control must violate the conditions; " + ctrl.note
        report.add(ctrl)
    return report
