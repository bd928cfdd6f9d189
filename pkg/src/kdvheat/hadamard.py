"""Hadamard's heat-kernel coefficients H_n(x, y) from a tau-function.

``H_n = (-1)^n sum_{k<n} 2^{n-k} (n-k)_{2k} / k! * W_{n-k}(x, y) / (x-y)^{n+k}``;
on the diagonal ``H_n(x, x) = 2^n / (2n-1)!! * W_{2n}(x, x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import DiagonalEvaluation
from .expr import (
    EvalPoint,
    RatExpExpression,
    RatioPoly,
    Site,
    TauExpression,
    evaluate,
    make_context,
    potential,
)
from .gegenbauer import double_factorial, pochhammer
from .sato import w_coeff
from .tau import ExpPoly

DEFAULT_PRECISION = 30


def guard_digits(n: int) -> int:
    return max(10, 2 * n)


def hadamard_weight(n: int, k: int) -> Fraction:
    return (-1) ** n * 2 ** (n - k) * pochhammer(n - k, 2 * k) / factorial(k)


@dataclass(frozen=True)
class HadamardCoefficient:
    order: int
    expression: RatExpExpression
    tau: ExpPoly

    def __call__(self, x, y, precision: int = DEFAULT_PRECISION, times=None):
        p = EvalPoint(x, times or {}, precision)
        return evaluate(self.expression, p, y, guard=guard_digits(self.order))


@lru_cache(maxsize=256)
def hadamard_expr(tau: ExpPoly, n: int) -> RatExpExpression:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return RatExpExpression(tau, {(0, (), ()): Fraction(1)})
    out = RatExpExpression(tau)
    for k in range(n):
        out = out + w_coeff(tau, n - k).shift_power(-(n + k)) * hadamard_weight(n, k)
    return out


def hadamard_coefficient(tau: ExpPoly, n: int) -> HadamardCoefficient:
    return HadamardCoefficient(n, hadamard_expr(tau, n), tau)


def hadamard_offdiag(tau: ExpPoly, n: int, x, y, precision: int = DEFAULT_PRECISION, times=None):
    """H_n(x, y) for x != y; raises :class:`DiagonalEvaluation` on the diagonal."""
    return hadamard_coefficient(tau, n)(x, y, precision, times)


@lru_cache(maxsize=256)
def hadamard_diag_expr(tau: ExpPoly, n: int) -> TauExpression:
    if n == 0:
        return TauExpression(tau, RatioPoly.constant(1))
    return w_coeff(tau, 2 * n).diagonal() * Fraction(2**n, double_factorial(2 * n - 1))


def hadamard_diag(tau: ExpPoly, n: int, x, precision: int = DEFAULT_PRECISION, times=None):
    return evaluate(hadamard_diag_expr(tau, n), EvalPoint(x, times or {}, precision), guard=guard_digits(n))


def richardson_diagonal(tau: ExpPoly, n: int, x, eps=("1e-2", "1e-3", "1e-4"),
                        precision: int = DEFAULT_PRECISION, times=None):
    """Extrapolate H_n(x, x + eps) to eps = 0 through the given steps (Neville)."""
    ctx = make_context(precision + guard_digits(n))
    x_m = ctx.mpf(x) if not isinstance(x, Fraction) else ctx.mpf(x.numerator) / x.denominator
    hs = [ctx.mpf(e) for e in eps]
    vals = [hadamard_offdiag(tau, n, x_m, x_m + h, precision, times) for h in hs]
    table = list(vals)
    m = len(hs)
    for level in range(1, m):
        for i in range(m - level):
            table[i] = (hs[i + level] * table[i] - hs[i] * table[i + 1]) / (hs[i + level] - hs[i])
    return table[0]


# ------------------------------------------------------------ closed forms


def hadamard_closed_forms(tau: ExpPoly, n: int, x, y, precision: int = DEFAULT_PRECISION, times=None):
    """Reference values of H_1, H_2, H_3 from the explicit low-order formulas.

    H_3 uses the u^2-integral identity, so tau must carry its s3 dependence.
    """
    if n not in (1, 2, 3):
        raise ValueError("closed forms exist for n = 1, 2, 3")
    ctx = make_context(precision + 20)
    sx = Site(tau, x, times or {}, ctx)
    sy = Site(tau, y, times or {}, ctx)
    d = sx.x - sy.x
    if d == 0:
        raise DiagonalEvaluation("closed forms need x != y")
    r1x, r2x, r3x = sx.rho((1,)), sx.rho((2,)), sx.rho((3,))
    r1y, r2y, r3y = sy.rho((1,)), sy.rho((2,)), sy.rho((3,))
    h1 = 2 / d * (r1x - r1y)
    if n == 1:
        return h1
    h2 = 2 / d**2 * ((r2x + r2y) - h1 - 2 * r1x * r1y)
    if n == 2:
        return h2
    integral = u_squared_integral_closed_form(sx, sy)
    cube = (
        -6 * d * h2
        + 2 * (r3x - r3y)
        - 2 * (r2x * r1x - r2y * r1y)
        + 4 * (r1x * r2y - r1y * r2x)
        + ctx.mpf(4) / 3 * (r1x**3 - r1y**3)
        + integral
    )
    return cube / d**3


def u_squared_integral_closed_form(sx: Site, sy: Site):
    """int_y^x u^2 for a KdV tau, through tau derivatives and d_3 log tau."""
    ctx = sx.ctx
    r1x, r2x, r3x = sx.rho((1,)), sx.rho((2,)), sx.rho((3,))
    r1y, r2y, r3y = sy.rho((1,)), sy.rho((2,)), sy.rho((3,))
    d3x, d3y = sx.rho((0, 1)), sy.rho((0, 1))
    return (
        -ctx.mpf(2) / 3 * (r3x - r3y)
        + 2 * (r2x * r1x - r2y * r1y)
        - ctx.mpf(4) / 3 * (r1x**3 - r1y**3)
        + ctx.mpf(8) / 3 * (d3x - d3y)
    )


# ------------------------------------------------------------ diagnostics


@lru_cache(maxsize=256)
def smoothness_expr(tau: ExpPoly, n: int, j: int) -> TauExpression:
    """sum_k 2^k C(j,k) (2n-2-k)!/(n-k-1)! d_x^{j-k} W_{k+1}(x, y) restricted to y = x."""
    if not 0 <= j <= 2 * n - 2:
        raise ValueError("need 0 <= j <= 2n - 2")
    out = RatExpExpression(tau)
    for k in range(min(n - 1, j) + 1):
        c = Fraction(2**k * comb(j, k) * factorial(2 * n - 2 - k), factorial(n - k - 1))
        out = out + w_coeff(tau, k + 1).dx(j - k) * c
    return out.diagonal()


def smoothness_check(tau: ExpPoly, n: int, j: int, x, precision: int = DEFAULT_PRECISION, times=None):
    return abs(evaluate(smoothness_expr(tau, n, j), EvalPoint(x, times or {}, precision)))


@lru_cache(maxsize=256)
def heat_operator_expr(tau: ExpPoly, n: int) -> RatExpExpression:
    """(d_x^2 + u(x)) H_n(x, y)."""
    h = hadamard_expr(tau, n)
    return h.dx(2) + h * potential(tau).poly


def recursion_residual_expr(tau: ExpPoly, n: int) -> RatExpExpression:
    """(x-y) d_x H_n + n H_n - L H_{n-1}."""
    h = hadamard_expr(tau, n)
    return h.dx().shift_power(1) + h * n - heat_operator_expr(tau, n - 1)


def recursion_residual(tau: ExpPoly, n: int, x, y, precision: int = DEFAULT_PRECISION, times=None):
    expr = recursion_residual_expr(tau, n)
    return abs(evaluate(expr, EvalPoint(x, times or {}, precision), y, guard=guard_digits(n) + 4))
