"""
Rational potentials have finite heat expansions
===============================================

For tau = x the potential is -2/x^2 and every H_n with n >= 2 vanishes;
one level up (tau = x^3 - 3 s3) the series stops after H_2.
"""
from kdvheat import EvalPoint, evaluate, make_rational_tau, potential
from kdvheat.hadamard import hadamard_offdiag
from kdvheat.polynomial import format_poly

for level in (1, 2):
    tau = make_rational_tau(level)
    (phase, prefactor), = tau.items()
    print(f"level {level}: tau = {format_poly(prefactor)}")
    print(f"  u(1.5) = {float(evaluate(potential(tau), EvalPoint(1.5))):.12f}")
    for n in range(1, 6):
        h = hadamard_offdiag(tau, n, 1.5, 0.7)
        print(f"  H_{n}(1.5, 0.7) = {float(h): .3e}")

# level 1 by hand: H_1 = -2/(xy)
print("\nH_1(1, 2) for tau = x:", float(hadamard_offdiag(make_rational_tau(1), 1, 1, 2)))
