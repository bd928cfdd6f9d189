"""
Gegenbauer structure of the smoothness polynomials
==================================================

P_{n,j}(w) collects the pole cancellations on the diagonal.  Each one is a
Gegenbauer polynomial with a half-integer (possibly negative) parameter.
"""
from fractions import Fraction

from kdvheat.gegenbauer import gegenbauer_def, gegenbauer_rec, pnj, pnj_gegenbauer_form

for lam in (Fraction(1), Fraction(1, 2), Fraction(-3, 2)):
    print(f"lambda = {lam}")
    for n in range(4):
        c = gegenbauer_rec(n, lam)
        assert c == gegenbauer_def(n, lam)
        print(f"  C_{n}: {[str(v) for v in c.coeffs]}")

print("\nP_{n,j} (ascending coefficients in w)")
for n in range(1, 4):
    for j in range(2 * n):
        p = pnj(n, j)
        same = p == pnj_gegenbauer_form(n, j)
        print(f"  n={n} j={j}: {[str(v) for v in p.coeffs]}  gegenbauer form agrees: {same}")
