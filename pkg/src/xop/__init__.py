"""
X1 exceptional orthogonal polynomials (Laguerre types I, II, III and
Jacobi) built from adjusted moments.

Typical use::

    from xop import make_family, generate_moments, exceptional_polynomial
    fam = make_family("lag3", -0.5)
    y2 = exceptional_polynomial(fam, 2).monomial()
"""

from .detrep import (
    ExceptionalPolynomial,
    build_matrix,
    exceptional_polynomial,
    gram_schmidt_polynomial,
)
from .families import (
    DegreeError,
    FamilyDescriptor,
    Kind,
    ParameterError,
    make_family,
    natural_operator_coeffs,
    norm_Kn,
    s_via_factorization,
)
from .moments import MomentTable, generate_moments, initial_moments, moment_by_quadrature
from .poly import Polynomial, ShiftedPolynomial
from .verify import VerificationReport, verify_family

__version__ = "0.1.0"

__all__ = [
    "ExceptionalPolynomial",
    "build_matrix",
    "exceptional_polynomial",
    "gram_schmidt_polynomial",
    "DegreeError",
    "FamilyDescriptor",
    "Kind",
    "ParameterError",
    "make_family",
    "natural_operator_coeffs",
    "norm_Kn",
    "s_via_factorization",
    "MomentTable",
    "generate_moments",
    "initial_moments",
    "moment_by_quadrature",
    "Polynomial",
    "ShiftedPolynomial",
    "VerificationReport",
    "verify_family",
]
