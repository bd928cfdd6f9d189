"""Independent checks: the heat recursion integrated by quadrature, and KdV flows.

``recursion_coeff`` solves ``(x-y) d_x H_n + n H_n = L H_{n-1}`` in the form

    H_n(x, y) = int_0^1 t^{n-1} (L H_{n-1})(y + t (x - y), y) dt,

the unique solution bounded at the diagonal.  In ``"hybrid"`` mode
``L H_{n-1}`` is the exact expression from :mod:`kdvheat.hadamard`; in
``"pure"`` mode every level is itself a quadrature, using only u and its
x-derivatives, via ``d_x^r H_n = int t^{n-1+r} (d^r L H_{n-1}) dt``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .errors import QuadratureNotConverged
from .expr import NUMPY, EvalPoint, RatioPoly, Site, TauExpression, evaluate, make_context, potential
from .gegenbauer import double_factorial
from .hadamard import guard_digits, hadamard_diag_expr, heat_operator_expr, u_squared_integral_closed_form
from .tau import ExpPoly


@dataclass(frozen=True)
class QuadratureConfig:
    nodes: int = 16
    panels: int = 1
    target_tol: float = 1e-10
    max_panels: int = 64
    pure_max_order: int = 4

    def __post_init__(self):
        if self.nodes < 4:
            raise ValueError("need at least 4 Gauss-Legendre nodes per panel")
        if self.panels < 1:
            raise ValueError("need at least one panel")


@lru_cache(maxsize=64)
def gauss_legendre_unit(nodes: int, panels: int):
    """Composite Gauss-Legendre nodes and weights on [0, 1]."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    ts = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return ts, ws


class PotentialEvaluator:
    """u = 2 d_x^2 log tau and its x-derivatives as exact tau-ratio polynomials."""

    def __init__(self, tau: ExpPoly):
        self.tau = tau
        self._derivs = [potential(tau).poly]

    def derivative(self, order: int = 0) -> RatioPoly:
        while len(self._derivs) <= order:
            self._derivs.append(self._derivs[-1].diff(0))
        return self._derivs[order]

    def expression(self, order: int = 0) -> TauExpression:
        return TauExpression(self.tau, self.derivative(order))

    def values(self, x, max_order: int, times=None, ctx=None):
        """[u, u', ..., u^(max_order)] at x (mpmath, or float arrays with ``ctx=NUMPY``)."""
        ctx = ctx or make_context(30)
        site = Site(self.tau, x, times or {}, ctx)
        return [self.derivative(i).evaluate_at(site) for i in range(max_order + 1)]


# ------------------------------------------------------------ recursion oracle


def recursion_coeff(tau: ExpPoly, n: int, x, y, q: QuadratureConfig | None = None,
                    mode: str = "hybrid", precision: int = 20, times=None):
    """H_n(x, y) from the integrated heat recursion (independent of the closed formula)."""
    q = q or QuadratureConfig()
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    if mode == "hybrid":
        return _recursion_hybrid(tau, n, x, y, q, precision, times or {})
    if mode == "pure":
        if n > q.pure_max_order:
            raise ValueError(f"pure mode is limited to n <= {q.pure_max_order}")
        return _recursion_pure(tau, n, float(x), float(y), q, times or {})
    raise ValueError("mode must be 'hybrid' or 'pure'")


def _converge(rule, q: QuadratureConfig):
    panels = q.panels
    prev = rule(panels)
    while panels * 2 <= q.max_panels:
        panels *= 2
        cur = rule(panels)
        if abs(cur - prev) <= q.target_tol * max(1, abs(cur)):
            return cur
        prev = cur
    raise QuadratureNotConverged(f"no convergence up to {q.max_panels} panels")


def _recursion_hybrid(tau, n, x, y, q, precision, times):
    integrand = heat_operator_expr(tau, n - 1)
    ctx = make_context(precision + guard_digits(n))
    xm, ym = ctx.mpf(_as_mp_input(x)), ctx.mpf(_as_mp_input(y))
    d = xm - ym

    def rule(panels):
        ts, ws = gauss_legendre_unit(q.nodes, panels)
        total = ctx.mpf(0)
        for t, w in zip(ts, ws):
            t = ctx.mpf(t)
            xi = ym + t * d
            val = evaluate(integrand, EvalPoint(xi, times, precision), ym, guard=guard_digits(n))
            total += ctx.mpf(w) * t ** (n - 1) * val
        return total

    return _converge(rule, q)


def _as_mp_input(v):
    if isinstance(v, Fraction):
        return str(v.numerator / v.denominator) if v.denominator == 1 else mpf_from_fraction(v)
    return v


def mpf_from_fraction(v: Fraction):
    import mpmath

    return mpmath.mpf(v.numerator) / v.denominator


def _recursion_pure(tau, n, x, y, q, times):
    pot = PotentialEvaluator(tau)

    def u_derivs(points, order):
        return pot.values(points, order, times, ctx=NUMPY)

    def level(m, points, rmax, ts, ws):
        # returns array (rmax+1, len(points)) of d_x^r H_m at points
        xi = y + ts[:, None] * (points[None, :] - y)  # (Q, N)
        flat = xi.ravel()
        if m == 1:
            us = u_derivs(flat, rmax)
            out = []
            for r in range(rmax + 1):
                f = np.asarray(us[r]).reshape(xi.shape)
                out.append(np.einsum("q,qn->n", ws * ts**r, f))
            return np.array(out)
        inner = level(m - 1, flat, rmax + 2, ts, ws)
        us = u_derivs(flat, rmax)
        out = []
        for r in range(rmax + 1):
            f = inner[r + 2].copy()
            for i in range(r + 1):
                f += comb(r, i) * np.asarray(us[i]) * inner[r - i]
            out.append(np.einsum("q,qn->n", ws * ts ** (m - 1 + r), f.reshape(xi.shape)))
        return np.array(out)

    def rule(panels):
        ts, ws = gauss_legendre_unit(q.nodes, panels)
        return float(level(n, np.array([x]), 0, ts, ws)[0, 0])

    tol = max(q.target_tol, 1e-12)
    return _converge(rule, QuadratureConfig(q.nodes, q.panels, tol, q.max_panels, q.pure_max_order))


# ------------------------------------------------------------ KdV diagnostics


def kdv_residual_poly() -> RatioPoly:
    """4 d_3 u - u''' - 6 u u' in the tau-ratio ring."""
    u = potential(None).poly
    u1 = u.diff(0)
    return u.diff(1) * 4 - u1.diff(0).diff(0) - u * u1 * 6


def kdv_flow_check(tau: ExpPoly, x, times=None, precision: int = 30):
    site = Site(tau, x, times or {}, make_context(precision + 10))
    return abs(kdv_residual_poly().evaluate_at(site))


def u_squared_integral(tau: ExpPoly, x, y, q: QuadratureConfig | None = None,
                       precision: int = 30, times=None):
    """int_y^x u(xi)^2 d xi by composite Gauss-Legendre."""
    q = q or QuadratureConfig()
    u2 = potential(tau).poly * potential(tau).poly
    ctx = make_context(precision + 10)
    xm, ym = ctx.mpf(_as_mp_input(x)), ctx.mpf(_as_mp_input(y))
    d = xm - ym

    def rule(panels):
        ts, ws = gauss_legendre_unit(q.nodes, panels)
        total = ctx.mpf(0)
        for t, w in zip(ts, ws):
            site = Site(tau, ym + ctx.mpf(t) * d, times or {}, ctx)
            total += ctx.mpf(w) * u2.evaluate_at(site)
        return total * d

    return _converge(rule, q)


def u_squared_integral_check(tau: ExpPoly, x, y, q: QuadratureConfig | None = None,
                             precision: int = 30, times=None):
    ctx = make_context(precision + 10)
    closed = u_squared_integral_closed_form(Site(tau, x, times or {}, ctx), Site(tau, y, times or {}, ctx))
    return abs(u_squared_integral(tau, x, y, q, precision, times) - closed)


def higher_flow_check(tau: ExpPoly, n: int, x, times=None, precision: int = 30):
    """|d_{2n-1} u - (2n-1)!!/2^(n-1) d_x H_n(x, x)|."""
    if n < 1:
        raise ValueError("n must be positive")
    flow = potential(tau).poly.diff(n - 1)
    diag_dx = hadamard_diag_expr(tau, n).poly.diff(0)
    resid = flow - diag_dx * Fraction(double_factorial(2 * n - 1), 2 ** (n - 1))
    site = Site(tau, x, times or {}, make_context(precision + guard_digits(n)))
    return abs(resid.evaluate_at(site))
