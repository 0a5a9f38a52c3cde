import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special as sp

from xop.poly import (
    Polynomial,
    ShiftedPolynomial,
    ZeroDivisorError,
    divide_exact,
    jacobi_eval,
    jacobi_poly,
    laguerre_eval,
    laguerre_poly,
    to_monomial,
    to_shifted,
)

coeff = st.floats(-10.0, 10.0)
coeffs = st.lists(coeff, min_size=1, max_size=8)
xs = st.floats(-3.0, 3.0)
param = st.floats(-0.9, 4.0)


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * (1.0 + abs(b))


# -- closed forms for n <= 2 -------------------------------------------------


def laguerre_closed(n, a, x):
    return [1.0, 1.0 + a - x, 0.5 * (x * x - 2 * (a + 2) * x + (a + 1) * (a + 2))][n]


def jacobi_closed(n, a, b, x):
    if n == 0:
        return 1.0
    if n == 1:
        return 0.5 * (a - b) + 0.5 * (a + b + 2) * x
    # expansion about x = 1
    return (
        (a + 1) * (a + 2) / 2
        + (a + 2) * (a + b + 3) * (x - 1) / 2
        + (a + b + 3) * (a + b + 4) * (x - 1) ** 2 / 8
    )


def test_recurrences_match_closed_forms_at_random_samples():
    rng = np.random.default_rng(20240611)
    for _ in range(20):
        a, b = rng.uniform(-0.9, 4.0, size=2)
        x = rng.uniform(-1.0, 5.0)
        for n in range(3):
            assert abs(laguerre_eval(n, a, x) - laguerre_closed(n, a, x)) <= 1e-12 * (1 + abs(laguerre_closed(n, a, x)))
            assert abs(jacobi_eval(n, a, b, x) - jacobi_closed(n, a, b, x)) <= 1e-12 * (1 + abs(jacobi_closed(n, a, b, x)))


@given(st.integers(0, 12), param, xs)
def test_laguerre_matches_scipy(n, a, x):
    expected = sp.eval_genlaguerre(n, a, x)
    assert close(laguerre_eval(n, a, x), expected, 1e-11)
    assert close(laguerre_poly(n, a)(x), expected, 1e-9)


@given(st.integers(0, 10), param, param, st.floats(-1.0, 1.0))
def test_jacobi_matches_scipy(n, a, b, x):
    expected = sp.eval_jacobi(n, a, b, x)
    assert close(jacobi_eval(n, a, b, x), expected, 1e-11)
    assert close(jacobi_poly(n, a, b)(x), expected, 1e-9)


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        laguerre_eval(-1, 0.0, 1.0)
    with pytest.raises(ValueError):
        jacobi_poly(-2, 0.0, 0.0)


def test_vectorized_evaluation():
    x = np.linspace(-1, 1, 5)
    assert np.allclose(jacobi_eval(3, 0.5, 1.5, x), sp.eval_jacobi(3, 0.5, 1.5, x))


# -- arithmetic ---------------------------------------------------------------


@given(coeffs, coeffs, xs)
def test_ring_operations_evaluate_pointwise(c1, c2, x):
    p, q = Polynomial(c1), Polynomial(c2)
    assert close((p + q)(x), p(x) + q(x))
    assert close((p - q)(x), p(x) - q(x))
    assert abs((p * q)(x) - p(x) * q(x)) <= 1e-9 * (1 + abs(p(x)) * (1 + abs(q(x))))


@given(coeffs, coeffs.filter(lambda c: abs(c[-1]) > 0.1))
def test_division_identity(c1, c2):
    p, d = Polynomial(c1), Polynomial(c2)
    q, r = p.divmod(d)
    assert r.degree < max(d.degree, 1)
    recon = q * d + r
    n = max(len(recon.coeffs), len(p.coeffs))
    assert np.allclose(recon.array(n), p.array(n), atol=1e-8 * (1 + p.norm()))


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroDivisorError):
        Polynomial((1.0, 2.0)).divmod(Polynomial())


def test_divide_exact_checks_remainder():
    num = Polynomial.from_roots(1.0, 2.0, 3.0)
    q, rel = divide_exact(num, Polynomial((-2.0, 1.0)))
    assert rel <= 1e-15 and np.allclose(q.coeffs, Polynomial.from_roots(1.0, 3.0).coeffs)
    with pytest.raises(ArithmeticError):
        divide_exact(num + 1.0, Polynomial((-2.0, 1.0)))


def test_trailing_zeros_trimmed_and_zero_poly():
    p = Polynomial((1.0, 0.0, 0.0))
    assert p.degree == 0
    z = Polynomial()
    assert z.is_zero() and z.degree == -1 and z.lead == 0.0
    assert (z + p).coeffs == (1.0,)
    assert z(np.array([1.0, 2.0])).tolist() == [0.0, 0.0]


def test_derivative_and_scaling():
    p = Polynomial((1.0, 2.0, 3.0))
    assert p.deriv().coeffs == (2.0, 6.0)
    assert p.deriv(3).is_zero()
    assert p.scale_argument(-1.0).coeffs == (1.0, -2.0, 3.0)


# -- shifted basis --------------------------------------------------------------


unit_coeffs = st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=9)


# Shifted-basis coefficients carry rounding of order eps * (|center| + |x|)**deg,
# so the bound is checked on a unit-scale domain.
@given(unit_coeffs, st.floats(-2.0, 2.0), st.integers(0, 2**32 - 1))
def test_basis_conversion_preserves_evaluation(c, center, seed):
    p = Polynomial(c)
    sp_ = to_shifted(p, center)
    xs_ = np.random.default_rng(seed).uniform(-1, 1, size=20)
    for x in xs_:
        assert abs(p(x) - sp_(x)) <= 1e-10 * (1 + abs(p(x)))


@given(coeffs, st.floats(-5.0, 5.0))
def test_round_trip(c, center):
    sp_ = ShiftedPolynomial(center, c)
    back = to_shifted(to_monomial(sp_), center)
    n = len(sp_.coeffs)
    scale = 1 + max(abs(v) for v in c) * (1 + abs(center)) ** n
    assert np.allclose(back.array(n), sp_.array(n), atol=1e-12 * scale)


def test_shifted_taylor_coefficients():
    # x^2 about 1: 1 + 2(x-1) + (x-1)^2
    assert to_shifted(Polynomial((0.0, 0.0, 1.0)), 1.0).coeffs == (1.0, 2.0, 1.0)
    assert ShiftedPolynomial(2.0, (1.0, 1.0)).scaled(3.0)(2.0) == 3.0
