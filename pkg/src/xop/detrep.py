"""
Exceptional polynomials from adjusted moments.

The Taylor coefficients ``c_i`` of ``y_n(x) = sum c_i (x - xi)**i`` solve
``A c = (0, ..., 0, K_n)`` where row 1 is the exceptional condition at
``xi``, row 2 is orthogonality against the first flag element
``c_{1,0} + c_{1,1} (x - xi)`` and rows 3..n+1 are orthogonality against
``(x - xi)**k``, k = 2..n.  The last row instead fixes ``<y_n, v_n> = K_n``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .families import DegreeError, FamilyDescriptor, Kind, norm_Kn
from .moments import MomentTable, generate_moments
from .poly import ShiftedPolynomial

__all__ = [
    "MomentMatrix",
    "SingularMatrixError",
    "InsufficientMomentsError",
    "RankDeficiencyError",
    "ExceptionalPolynomial",
    "build_matrix",
    "solve_coefficients",
    "exceptional_polynomial",
    "gram_schmidt_polynomial",
    "moment_inner_product",
    "flag_element",
    "COND_FLAG",
]

COND_FLAG = 1e12


class SingularMatrixError(np.linalg.LinAlgError):
    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


class InsufficientMomentsError(ValueError):
    pass


class RankDeficiencyError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class MomentMatrix:
    family: FamilyDescriptor
    n: int
    A: np.ndarray
    rhs: np.ndarray
    e0: float
    e1: float
    exact_A: Tuple[Tuple[Fraction, ...], ...] = field(default=(), compare=False, repr=False)
    exact_rhs: Tuple[Fraction, ...] = field(default=(), compare=False, repr=False)

    @property
    def size(self):
        return self.n + 1


@dataclass(frozen=True)
class ExceptionalPolynomial:
    """Result of a determinantal solve."""

    family: FamilyDescriptor
    degree: int
    poly: ShiftedPolynomial
    condition: float
    method: str
    precision: str = "exact"

    @property
    def flagged(self) -> bool:
        return self.condition > COND_FLAG

    def monomial(self):
        return self.poly.to_monomial()


def _check_degree(family, n):
    if n < 0 or n == family.missing_degree:
        raise DegreeError(f"degree {n} is missing from the {family.kind.value} sequence")


def build_matrix(
    family: FamilyDescriptor, n: int, moments: MomentTable, row1_scale: float = 1.0
) -> MomentMatrix:
    """Assemble the ``(n+1) x (n+1)`` matrix and right-hand side for degree ``n >= 1``.

    Row 1 is ``gamma * [-e0, e1, 0, ...]`` so that ``A c`` reproduces
    ``gamma * (e1 y'(xi) - e0 y(xi))``, the exceptional condition at ``xi``.
    The matrix is kept both in binary64 and as exact rationals built from
    the table's exact moments.
    """
    _check_degree(family, n)
    if n < 1:
        raise DegreeError("the matrix form needs n >= 1")
    if row1_scale == 0:
        raise ValueError("row 1 scale must be nonzero")
    need = 2 * n + 1
    if len(moments) < need:
        raise InsufficientMomentsError(f"degree {n} needs mu_0..mu_{need - 1}, got {len(moments)} moments")
    e0, e1 = family.e_row()
    c10, c11 = family.c1
    mu = moments.exact_values()
    g = Fraction(row1_scale)
    rows = [[-g * Fraction(e0), g * Fraction(e1)] + [Fraction(0)] * (n - 1)]
    rows.append([Fraction(c10) * mu[j] + Fraction(c11) * mu[j + 1] for j in range(n + 1)])
    for row in range(2, n + 1):
        rows.append([mu[row + j] for j in range(n + 1)])
    rhs = [Fraction(0)] * n + [Fraction(norm_Kn(family, n))]
    A = np.array([[float(v) for v in r] for r in rows])
    return MomentMatrix(
        family, n, A, np.array([float(v) for v in rhs]), e0, e1,
        exact_A=tuple(tuple(r) for r in rows), exact_rhs=tuple(rhs),
    )


def _cond1(A):
    try:
        with np.errstate(all="ignore"):
            c = float(np.linalg.cond(A, 1))
    except np.linalg.LinAlgError:
        return math.inf
    return c if math.isfinite(c) else math.inf


def _gauss(rows, rhs=None):
    """Exact elimination with partial pivoting; returns ``(det, solution)``."""
    n = len(rows)
    M = [list(r) + ([rhs[i]] if rhs is not None else []) for i, r in enumerate(rows)]
    det = Fraction(1)
    for c in range(n):
        p = max(range(c, n), key=lambda r: abs(M[r][c]))
        if M[p][c] == 0:
            return Fraction(0), None
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    if rhs is None:
        return det, None
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / M[i][i]
    return det, x


def _det(rows):
    return _gauss(rows)[0]


def _solve_exact(matrix, method):
    A, rhs = [list(r) for r in matrix.exact_A], list(matrix.exact_rhs)
    size = matrix.size
    if method == "lu":
        det, x = _gauss(A, rhs)
        if det == 0:
            raise SingularMatrixError("moment matrix is singular", _cond1(matrix.A))
        return np.array([float(v) for v in x])
    det = _det(A)
    if det == 0:
        raise SingularMatrixError("moment matrix has zero determinant", _cond1(matrix.A))
    if method == "cramer":
        out = []
        for i in range(size):
            Ai = [r[:i] + [rhs[k]] + r[i + 1:] for k, r in enumerate(A)]
            out.append(_det(Ai) / det)
        return np.array([float(v) for v in out])
    if method == "cofactor":
        K = rhs[-1]
        last = size - 1
        out = []
        for i in range(size):
            minor = [r[:i] + r[i + 1:] for r in A[:-1]]
            out.append((-1) ** (last + i) * _det(minor) * K / det)
        return np.array([float(v) for v in out])
    raise ValueError(f"unknown solve method {method!r}")


def _solve_binary64(matrix, method):
    A, rhs = matrix.A, matrix.rhs
    size = matrix.size
    if method == "lu":
        with warnings.catch_warnings():
            # singularity is reported below with a condition estimate
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
        pivots = np.abs(np.diag(lu))
        if pivots.min() <= np.finfo(float).eps * pivots.max() * size:
            raise SingularMatrixError("moment matrix is numerically singular", _cond1(A))
        return scipy.linalg.lu_solve((lu, piv), rhs)
    det = np.linalg.det(A)
    if det == 0.0 or not math.isfinite(det):
        raise SingularMatrixError("moment matrix has zero determinant", _cond1(A))
    if method == "cramer":
        out = np.empty(size)
        for i in range(size):
            Ai = A.copy()
            Ai[:, i] = rhs
            out[i] = np.linalg.det(Ai) / det
        return out
    if method == "cofactor":
        K = rhs[-1]
        last = size - 1
        out = np.empty(size)
        for i in range(size):
            minor = np.delete(A[:-1], i, axis=1)
            out[i] = (-1) ** (last + i) * np.linalg.det(minor) * K / det
        return out
    raise ValueError(f"unknown solve method {method!r}")


def solve_coefficients(matrix: MomentMatrix, method: str = "lu", precision: str = "exact") -> np.ndarray:
    """Taylor coefficients about ``xi``.

    ``"lu"`` is Gaussian elimination with partial pivoting; ``"cramer"``
    forms ``det A_i / det A``; ``"cofactor"`` expands
    ``K_n/det A * det[first n rows; 1, t, ..., t^n]`` along its last row.

    ``precision="exact"`` runs the chosen path in rational arithmetic on
    the exact matrix and rounds only the result; ``"binary64"`` uses
    LAPACK on the rounded matrix.
    """
    if precision == "exact":
        if not matrix.exact_A:
            raise ValueError("matrix carries no exact entries")
        return _solve_exact(matrix, method)
    if precision == "binary64":
        return _solve_binary64(matrix, method)
    raise ValueError(f"unknown precision {precision!r}")


def exceptional_polynomial(
    family: FamilyDescriptor,
    n: int,
    moments: Optional[MomentTable] = None,
    method: str = "lu",
    precision: str = "exact",
    row1_scale: float = 1.0,
) -> ExceptionalPolynomial:
    """Degree-``n`` exceptional polynomial as a shifted polynomial about ``xi``.

    The degree-0 type III polynomial is the constant normalized by
    ``c_0 mu_0 = K_0``.  The attached condition number is the 1-norm
    estimate of the binary64 matrix; results above ``COND_FLAG`` are
    flagged.
    """
    _check_degree(family, n)
    if moments is None:
        moments = generate_moments(family, max(2 * n + 1, 3))
    if n == 0:
        c0 = norm_Kn(family, 0) / moments[0]
        return ExceptionalPolynomial(family, 0, ShiftedPolynomial(family.xi, (c0,)), 1.0, method, precision)
    matrix = build_matrix(family, n, moments, row1_scale)
    coeffs = solve_coefficients(matrix, method, precision)
    poly = ShiftedPolynomial(family.xi, coeffs)
    return ExceptionalPolynomial(family, n, poly, _cond1(matrix.A), method, precision)


def moment_inner_product(f: Sequence, g: Sequence, mu: Sequence):
    """``<f, g>`` for shifted-basis coefficient vectors: ``sum f_i g_j mu_{i+j}``.

    Works on floats or on ``Fraction`` entries (then the sum is exact).
    """
    need = len(f) + len(g) - 1
    if len(mu) < need:
        raise InsufficientMomentsError(f"inner product needs {need} moments, got {len(mu)}")
    if any(isinstance(v, Fraction) for v in mu):
        return sum((fi * gj * mu[i + j] for i, fi in enumerate(f) for j, gj in enumerate(g) if fi and gj), Fraction(0))
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    mu = np.asarray(mu, dtype=float)
    H = mu[np.add.outer(np.arange(len(f)), np.arange(len(g)))]
    return float(f @ H @ g)


def flag_element(family: FamilyDescriptor, k: int, size: int) -> list:
    """Exact shifted coefficients of the degree-k flag element, padded to ``size``.

    The lowest element is the first exceptional polynomial
    ``c_{1,0} + c_{1,1} (x - xi)`` (the constant 1 for type III); the rest
    are ``(x - xi)**k``.
    """
    out = [Fraction(0)] * size
    if k == 1 and family.kind is not Kind.LAG3:
        out[0], out[1] = Fraction(family.c1[0]), Fraction(family.c1[1])
    else:
        out[k] = Fraction(1)
    return out


def _flag(family, n, size):
    lowest = 0 if family.kind is Kind.LAG3 else 1
    degrees = [lowest] + list(range(2, n + 1))
    return [flag_element(family, k, size) for k in degrees]


def gram_schmidt_polynomial(family: FamilyDescriptor, n: int, moments: MomentTable) -> ShiftedPolynomial:
    """Degree-``n`` element of the flag orthogonalized under the moment functional.

    Modified Gram-Schmidt in exact arithmetic on the table's exact moments.
    The result keeps unit coefficient on ``(x - xi)**n``; the lowest flag
    element is returned unchanged.
    """
    _check_degree(family, n)
    if len(moments) < 2 * n + 1:
        raise InsufficientMomentsError(f"degree {n} needs mu_0..mu_{2 * n}")
    mu = moments.exact_values()
    size = max(n + 1, 2)
    done, norms = [], []
    for vec in _flag(family, n, size):
        v = list(vec)
        for u, nu in zip(done, norms):
            proj = moment_inner_product(v, u, mu) / nu
            v = [a - proj * b for a, b in zip(v, u)]
        nrm = moment_inner_product(v, v, mu)
        scale = moment_inner_product(vec, vec, mu)
        if not abs(nrm) > Fraction(1e-14) * abs(scale):
            raise RankDeficiencyError("flag element is numerically dependent on its predecessors")
        done.append(v)
        norms.append(nrm)
    return ShiftedPolynomial(family.xi, [float(c) for c in done[-1]])
