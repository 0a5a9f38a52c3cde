# coding: utf-8

# # Checking the output
#
# A determinantal polynomial is only believable if it passes checks that do
# not reuse the moment matrix: it must be an eigenfunction of the
# second-order operator, orthogonal under direct quadrature, and (for
# Type III) match the Darboux closed form.

from xop import make_family, verify_family
from xop.verify import darboux_typeIII, natural_operator_residual, one_minus_cos, orthogonality_matrix
from xop import exceptional_polynomial


fam = make_family("lag1", 1.5)
for n in range(1, 7):
    y = exceptional_polynomial(fam, n).monomial()
    lam, res = natural_operator_residual(fam, y)
    print(f"n={n}  lambda={lam: .12f}  residual={res:.1e}")


# Orthogonality by quadrature.  Off-diagonals are relative to the
# geometric mean of the two diagonal entries.  The diagonal is reported
# next to the tabulated norm; the linear system pins <y_n, (x-xi)^n>
# rather than <y_n, y_n>, so the two need not match.

g = orthogonality_matrix(fam, 6)
print("max off-diagonal:", g.max_offdiag)
for n, G, K in zip(g.degrees, g.gram.diagonal(), g.norms_table):
    print(f"n={n}  <y,y>={G:.6e}  K_n={K:.6e}")


# Type III against its closed form.

a = -0.25
t3 = make_family("lag3", a)
for n in (0, 2, 3, 4, 5):
    print(n, one_minus_cos(darboux_typeIII(a, n), exceptional_polynomial(t3, n).monomial()))


# Everything at once, as a report.

report = verify_family(make_family("jacobi", 2.0, 4.0), 6)
for c in sorted(report.checks, key=lambda c: c.name):
    print(f"{c.status:14s} {c.name:34s} {c.residual:.2e}")
print("all passed:", report.passed)
