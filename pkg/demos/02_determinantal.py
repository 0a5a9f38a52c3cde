# coding: utf-8

# # Exceptional polynomials from a moment matrix
#
# The degree-n polynomial is written in powers of (x - xi).  Its Taylor
# coefficients solve an (n+1) x (n+1) system: one row enforces the
# exceptional condition at xi, one row makes it orthogonal to the first
# exceptional polynomial, and the rest are shifted-Hankel rows of moments.

import numpy as np

from xop import make_family, generate_moments, exceptional_polynomial, gram_schmidt_polynomial
from xop.detrep import build_matrix
from xop.verify import one_minus_cos


fam = make_family("lag3", -0.5)
mu = generate_moments(fam, 5)
M = build_matrix(fam, 2, mu)
print(M.A)
print("rhs:", M.rhs)


# Solve it.  The degree-2 Type III polynomial should be a multiple of
# x^2 - 2 alpha x + alpha (alpha + 1), i.e. x^2 + x - 1/4 here.

y = exceptional_polynomial(fam, 2, mu)
c = np.asarray(y.monomial().coeffs)
print("monic:", c / c[-1])


# The same system can be solved three ways (LU, Cramer, cofactor along the
# last row).  In exact arithmetic they coincide to the last bit.

jac = make_family("jacobi", 0.5, 1.5)
mu = generate_moments(jac, 13)
for method in ("lu", "cramer", "cofactor"):
    p = exceptional_polynomial(jac, 5, mu, method=method)
    print(f"{method:9s}", p.poly.array(6))


# The binary64 route is here too.  The matrix gets badly conditioned as n
# grows, which is why the exact route is the default.

for n in range(2, 7):
    ex = exceptional_polynomial(jac, n, mu)
    fl = exceptional_polynomial(jac, n, mu, precision="binary64")
    gap = np.max(np.abs(ex.poly.array(n + 1) - fl.poly.array(n + 1)) / np.abs(ex.poly.array(n + 1)))
    print(f"n={n}  cond {ex.condition:.2e}  binary64 rel gap {gap:.1e}")


# Independent path: Gram-Schmidt over the flag {y_1, (x-xi)^2, (x-xi)^3, ...}.

for n in range(1, 7):
    gs = gram_schmidt_polynomial(jac, n, mu).to_monomial()
    det = exceptional_polynomial(jac, n, mu).monomial()
    print(n, one_minus_cos(gs, det))
