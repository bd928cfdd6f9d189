"""
How close to the diagonal can we go?
====================================

The tau formula subtracts terms of size |x-y|^-(2n-1) that almost cancel.
Extra working digits are added automatically from the pole order, so the
result stays accurate; compare with a 100-digit reference.
"""
import mpmath

from kdvheat import make_soliton
from kdvheat.hadamard import hadamard_offdiag

tau = make_soliton([1])
x = mpmath.mpf("0.3")

print("n  |x-y|    rel. error at 20 digits")
for n in (2, 4, 6):
    for gap in ("1e-1", "1e-3", "1e-6", "1e-9"):
        y = x + mpmath.mpf(gap)
        ref = hadamard_offdiag(tau, n, x, y, 100)
        got = hadamard_offdiag(tau, n, x, y, 20)
        print(f"{n}  {gap:>6}   {float(abs(got - ref) / abs(ref)):.1e}")
