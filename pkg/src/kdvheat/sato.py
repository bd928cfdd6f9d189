"""Wave-function coefficients, the kernel coefficients W_n and bilinear checks.

The reduced wave functions are handled only through their coefficients
``psi_k = S_k(-d~) tau / tau`` and ``psi*_k = S_k(+d~) tau / tau``; the
exponential factors cancel analytically in every product used here.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .expr import EvalPoint, RatExpExpression, RatioPoly, Site, TauExpression, make_context, potential
from .schur import schur_ratio
from .tau import ExpPoly

SIDES = ("wave", "adjoint")


@dataclass(frozen=True)
class WaveCoefficient:
    index: int
    side: str
    expression: TauExpression


def wave_ratio(k: int, side: str = "wave") -> RatioPoly:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    return schur_ratio(k, -1 if side == "wave" else 1)


def wave_coeff(tau: ExpPoly, k: int, side: str = "wave") -> WaveCoefficient:
    return WaveCoefficient(k, side, TauExpression(tau, wave_ratio(k, side)))


def w_coeff(tau: ExpPoly, n: int) -> RatExpExpression:
    """W_n(x, y) = sum_k psi_k(x) psi*_{n-k}(y)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = RatExpExpression(tau)
    for k in range(n + 1):
        out = out + RatExpExpression.from_product(tau, wave_ratio(k, "wave"), wave_ratio(n - k, "adjoint"))
    return out.reduced()


def w_coeff_swapped(tau: ExpPoly, n: int) -> RatExpExpression:
    """The same sum built with the adjoint factor at x and the wave factor at y.

    Evaluated at ``(b, a)`` it must reproduce ``w_coeff`` at ``(a, b)``.
    """
    out = RatExpExpression(tau)
    for k in range(n + 1):
        out = out + RatExpExpression.from_product(tau, wave_ratio(n - k, "adjoint"), wave_ratio(k, "wave"))
    return out.reduced()


def _nth_x_derivative(p: RatioPoly, i: int) -> RatioPoly:
    for _ in range(i):
        p = p.diff(0)
    return p


def bilinear_residue(n: int, l: int, K: int | None = None) -> RatioPoly:
    """Coefficient of z^-1 in z^{2n} [(d_x + z)^l Psibar] Psibar*, as a tau-ratio polynomial.

    Only ``psi_k, psi*_j`` with ``k + j <= 2n + l + 1`` contribute, so the
    residue is exact once the truncation order ``K`` reaches that bound.
    """
    top = 2 * n + l + 1
    K = top if K is None else K
    out = RatioPoly()
    for i in range(l + 1):
        total = top - i
        for k in range(total + 1):
            j = total - k
            if k > K or j > K:
                continue
            term = _nth_x_derivative(wave_ratio(k, "wave"), i) * wave_ratio(j, "adjoint")
            out = out + term * comb(l, i)
    return out


def bilinear_check(tau: ExpPoly, n: int, l: int, K: int, point: EvalPoint):
    """|res_z z^{2n} Psi^{(l)} Psi*| at ``point`` from the order-K expansions."""
    if K < 2 * n + l + 4:
        raise ValueError(f"truncation K={K} too small for (n, l) = ({n}, {l})")
    residue = bilinear_residue(n, l, K)
    site = Site(tau, point.x, point.times, make_context(point.precision + 10))
    return abs(residue.evaluate_at(site))


def wave_equation_residual(tau: ExpPoly, k: int, point: EvalPoint, side: str = "wave"):
    """|(d^2 + u) psi_k +- 2 d psi_{k+1}| (the z^-k coefficient of L Psibar +- 2z Psibar')."""
    u = potential(tau).poly
    psi = wave_ratio(k, side)
    nxt = wave_ratio(k + 1, side).diff(0) * 2
    lhs = psi.diff(0).diff(0) + u * psi
    lhs = lhs + nxt if side == "wave" else lhs - nxt
    site = Site(tau, point.x, point.times, make_context(point.precision + 10))
    return abs(lhs.evaluate_at(site))
