"""
The Lax hierarchy by pseudo-differential calculus
=================================================

Square root of L = d^2 + u, its odd powers, and the flows
[(L^(j/2))_+, L] as differential polynomials in u.
"""
from kdvheat import make_soliton
from kdvheat.psdo import lax_rhs, lax_vs_wkernel, psdo_mul, schrodinger, sqrt_L

L = schrodinger()
print("L   =", L)
print("L^2 =", psdo_mul(L, L))

S = sqrt_L(4)
print("\nL^(1/2) =", S)
print("check (L^(1/2))^2 - L through order -3:", psdo_mul(S, S) - L)

for j in (1, 3, 5, 7):
    print(f"\nj = {j}:  d_{j} u = {lax_rhs(j)}")

# the same flows read off the kernel coefficients W_{2n}(x, x) of a soliton
tau = make_soliton([1, 2], [0, "1/3"])
for n in (1, 2, 3):
    print(f"Lax vs kernel, n = {n}: {float(lax_vs_wkernel(tau, n, 0.4)):.1e}")
