import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sint

from xop.specfun import (
    DomainError,
    PoleError,
    QuadratureError,
    QuadratureSpec,
    appell_f1,
    exp_integral_Ea,
    gamma,
    integrate,
    lower_incomplete_gamma,
    upper_incomplete_gamma,
)

positive_x = st.floats(0.05, 20.0)


def rel(a, b):
    return abs(a - b) / abs(b)


# -- configuration ----------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [dict(rel_tol=0.0), dict(abs_tol=-1.0), dict(max_depth=0), dict(endpoint="log"), dict(infinite="cubic")],
)
def test_spec_rejects_bad_fields(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


# -- gamma ------------------------------------------------------------------


@given(st.floats(0.1, 50.0))
def test_gamma_matches_mpmath_positive(x):
    assert rel(gamma(x), float(mp.gamma(x))) <= 1e-13


@given(st.floats(-49.9, -0.1).filter(lambda v: abs(v - round(v)) > 1e-3))
def test_gamma_matches_mpmath_negative(x):
    assert rel(gamma(x), float(mp.gamma(x))) <= 1e-13


@pytest.mark.parametrize("x", [0, -1, -2, -7])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


# -- incomplete gamma -------------------------------------------------------


@given(st.floats(-3.0, 3.0), positive_x)
def test_upper_incomplete_gamma_matches_mpmath(a, x):
    expected = float(mp.gammainc(a, x, mp.inf))
    assert rel(upper_incomplete_gamma(a, x), expected) <= 1e-10


@pytest.mark.parametrize("a,x", [(-0.5, 0.5), (-1.0, 1.0), (-1.5, 0.25), (0.0, 2.0), (-2.5, 3.0)])
def test_upper_incomplete_gamma_nonpositive_a(a, x):
    assert rel(upper_incomplete_gamma(a, x), float(mp.gammainc(a, x, mp.inf))) <= 1e-10


@given(st.floats(0.1, 5.0), positive_x)
def test_lower_plus_upper_is_gamma(a, x):
    total = upper_incomplete_gamma(a, x) + lower_incomplete_gamma(a, x)
    assert rel(total, gamma(a)) <= 1e-9


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        upper_incomplete_gamma(1.0, 0.0)
    with pytest.raises(DomainError):
        lower_incomplete_gamma(-1.0, 1.0)


# -- generalized exponential integral -------------------------------------


@given(st.floats(-2.0, 3.0), positive_x)
def test_Ea_gamma_identity(a, x):
    # E_a(x) = x^(a-1) Gamma(1-a, x)
    assert rel(exp_integral_Ea(a, x), x ** (a - 1.0) * upper_incomplete_gamma(1.0 - a, x)) <= 1e-9


@given(st.floats(1.05, 4.0), positive_x)
def test_Ea_recurrence(a, x):
    lhs = (a - 1.0) * exp_integral_Ea(a, x)
    rhs = math.exp(-x) - x * exp_integral_Ea(a - 1.0, x)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1e-300)


def test_Ea_against_mpmath():
    for a, x in [(0.5, 0.3), (1.0, 1.0), (2.5, 4.0), (-1.5, 0.7)]:
        assert rel(exp_integral_Ea(a, x), float(mp.expint(a, x))) <= 1e-12


# -- Appell F1 --------------------------------------------------------------


@pytest.mark.parametrize(
    "args",
    [
        (1.0, -4.0, 1.0, 4.0, -1.0, 1.0 / 3.0),
        (1.0, -1.5, 1.0, 2.5, -1.0, 0.5),
        (1.0, 0.25, 1.0, 1.5, -1.0, -0.6),
        (0.5, 0.3, -0.7, 2.0, 0.4, -0.9),
    ],
)
def test_appell_f1_matches_mpmath(args):
    assert rel(appell_f1(*args), float(mp.appellf1(*args))) <= 1e-10


def test_appell_f1_domain_and_trivial():
    assert appell_f1(1.0, 2.0, 3.0, 4.0, 0.0, 0.0) == 1.0
    with pytest.raises(DomainError):
        appell_f1(1.0, 0.0, 0.0, 1.0, 0.1, 0.1)
    with pytest.raises(DomainError):
        appell_f1(0.0, 0.0, 0.0, 1.0, 0.1, 0.1)
    with pytest.raises(DomainError):
        appell_f1(1.0, 0.0, 0.0, 2.0, 1.0, 0.1)


# -- quadrature engine ------------------------------------------------------


def test_smooth_finite_interval():
    val, err = integrate(np.cos, 0.0, 2.0)
    assert abs(val - math.sin(2.0)) <= 1e-14
    assert err >= 0


@pytest.mark.parametrize("p", [-0.9, -0.5, 0.3, 2.0])
def test_algebraic_endpoint_singularities(p):
    spec = QuadratureSpec(rel_tol=1e-13, endpoint="algebraic-endpoint", max_depth=10)
    val, _ = integrate(lambda x, dl, dr: dl ** p * dr ** (-0.5), 0.0, 1.0, spec)
    expected = math.exp(math.lgamma(p + 1) + math.lgamma(0.5) - math.lgamma(p + 1.5))
    assert rel(val, expected) <= 1e-12


@pytest.mark.parametrize("mode", ["rational", "exponential"])
def test_half_infinite(mode):
    spec = QuadratureSpec(rel_tol=1e-13, max_depth=10, infinite=mode)
    val, _ = integrate(lambda x: x**1.5 * np.exp(-x) / (x + 2.0) ** 2, 0.0, math.inf, spec)
    expected, _ = sint.quad(lambda x: x**1.5 * math.exp(-x) / (x + 2.0) ** 2, 0, np.inf, epsabs=0, epsrel=1e-13)
    assert rel(val, expected) <= 1e-11


def test_reversed_interval_negates():
    a, _ = integrate(np.exp, 0.0, 1.0)
    b, _ = integrate(np.exp, 1.0, 0.0)
    assert a == -b


def test_extended_accumulation_agrees():
    plain, _ = integrate(np.sin, 0.0, 3.0)
    exact, _ = integrate(np.sin, 0.0, 3.0, QuadratureSpec(extended=True))
    assert abs(plain - exact) <= 1e-15


def test_non_convergence_raises_with_estimate():
    spec = QuadratureSpec(rel_tol=1e-15, abs_tol=1e-300, max_depth=3)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.sin(200.0 * x), 0.0, 1.0, spec)
    assert math.isfinite(info.value.value)


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: 1.0 / (x - 0.5), 0.0, 1.0)
