# coding: utf-8

# # Two exceptional roots
#
# With a quadratic eta there are two roots and two conditions.  The
# candidate flag elements below should satisfy both; a plain y = x should not.

from xop.poly import Polynomial
from xop.verify import x2_flag_check, x2_typeI_data


for alpha in (1.5, 2.5):
    eta, s, p, cands = x2_typeI_data(alpha)
    print("alpha =", alpha, " eta coefficients:", eta.coeffs)
    for c in x2_flag_check(eta, s, p, cands):
        print(f"   {c.status:5s} {c.name:30s} {c.residual:.1e}")
    ctrl = x2_flag_check(eta, s, p, {"y = x": Polynomial((0.0, 1.0))})[0]
    print(f"   {ctrl.status:5s} {ctrl.name:30s} {ctrl.residual:.1e}")


# The parameter convention matters.  Using eta = L_2^alpha(-x) instead of
# the shifted L_2^{alpha-1}(-x) breaks the Laguerre candidate and the
# mixed one; only the product of squares survives, since it vanishes to
# second order at both roots whatever they are.

eta, s, p, cands = x2_typeI_data(1.5, convention="unshifted")
for c in x2_flag_check(eta, s, p, cands):
    print(f"   {c.status:5s} {c.name:30s} {c.residual:.1e}")
