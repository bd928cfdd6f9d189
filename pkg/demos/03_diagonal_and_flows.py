"""
On the diagonal: limits, flows and smoothness
=============================================

The off-diagonal formula has poles at x = y that cancel.  We compare the
diagonal formula with an extrapolated limit, and use d_x H_n(x, x) to drive
the higher KdV flows.
"""
from kdvheat import EvalPoint, evaluate, make_soliton, potential
from kdvheat.hadamard import hadamard_diag, hadamard_offdiag, richardson_diagonal, smoothness_check
from kdvheat.oracle import higher_flow_check

tau = make_soliton([1])
x = 0.25

print("n   H_n(x, x)               Richardson limit - diagonal")
for n in range(1, 5):
    d = hadamard_diag(tau, n, x)
    r = richardson_diagonal(tau, n, x)
    print(f"{n}  {float(d): .15e}  {float(r - d): .1e}")

print("\nH_1(x, x) - u(x) =", float(hadamard_diag(tau, 1, x) - evaluate(potential(tau), EvalPoint(x))))

# approaching the diagonal, the error shrinks linearly in eps
d3 = hadamard_diag(tau, 3, x)
for eps in ("1e-2", "1e-3", "1e-4", "1e-6"):
    print(f"eps = {eps:>5}:  H_3(x, x + eps) - H_3(x, x) = {float(hadamard_offdiag(tau, 3, x, x + float(eps)) - d3): .3e}")

print("\nhigher flows d_{2n-1} u vs d_x H_n(x, x):")
for n in (1, 2, 3, 4):
    print(f"  n = {n}: residual {float(higher_flow_check(tau, n, x)):.1e}")

print("\npole cancellation (smoothness) residuals for n = 3:")
print("  ", [f"{float(smoothness_check(tau, 3, j, x)):.0e}" for j in range(5)])
