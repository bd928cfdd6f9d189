"""
Heat-kernel coefficients of a two-soliton potential
===================================================

H_n(x, y) straight from the tau-function, checked two independent ways:
the explicit low-order formulas and the integrated heat recursion.
"""
from kdvheat import make_soliton
from kdvheat.hadamard import hadamard_closed_forms, hadamard_offdiag
from kdvheat.oracle import recursion_coeff

# two solitons with wavenumbers 1 and 2, the second shifted by 1/3
tau = make_soliton([1, 2], [0, "1/3"])
print(f"tau has {len(tau)} exponential terms")

pairs = [(0.7, -0.4), (1.2, 0.3), (-0.9, 0.6)]

print("\nn   x     y      H_n (tau formula)        closed form - formula")
for x, y in pairs:
    for n in (1, 2, 3):
        h = hadamard_offdiag(tau, n, x, y, 40)
        ref = hadamard_closed_forms(tau, n, x, y, 40)
        print(f"{n}  {x:5.2f} {y:5.2f}  {float(h): .16e}  {float(h - ref): .1e}")

# the recursion only knows the potential u, never tau itself
print("\nn   recursion - formula")
x, y = pairs[0]
for n in range(1, 6):
    h = hadamard_offdiag(tau, n, x, y)
    r = recursion_coeff(tau, n, x, y)
    print(f"{n}  {float(r - h): .2e}")
