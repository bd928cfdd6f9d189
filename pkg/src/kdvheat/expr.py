"""Tau-ratio algebra, two-point expressions and arbitrary-precision evaluation.

Every derived quantity (wave coefficients, W_n, H_n, the potential) is a
polynomial in the *tau ratios* ``rho_a = (d^a tau) / tau`` for time
multi-indices ``a``.  Because ``d_j rho_a = rho_{a + e_j} - rho_a * rho_{e_j}``
this ring is closed under every time derivative and all structure constants
stay exact.  Two-point expressions carry an extra integer power of (x - y).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import mpmath
import numpy as np

from .errors import DenominatorZero, DiagonalEvaluation
from .polynomial import format_monomial, mono_mul, multi_index, slot_of, strip, unit
from .tau import ExpPoly, LinearPhase, TauFunction

DEFAULT_GUARD = 10
MIN_PRECISION = 16

# ---------------------------------------------------------------- evaluation


def _to_mpf(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    if isinstance(v, int):
        return ctx.mpf(v)
    return ctx.mpf(v)


@dataclass(frozen=True)
class EvalPoint:
    """A point ``(x, s3, s5, ...)``; absent times are zero."""

    x: object
    times: Mapping[int, object] = field(default_factory=dict)
    precision: int = 30

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise ValueError(f"precision must be at least {MIN_PRECISION} digits")
        for odd in self.times:
            if int(odd) == 1:
                raise ValueError("s1 is identified with x; shift x instead")
            slot_of(int(odd))

    def with_x(self, x) -> "EvalPoint":
        return EvalPoint(x, self.times, self.precision)


class NumpyContext:
    """Float64 stand-in for an mpmath context; lets a Site evaluate on arrays."""

    dps = 15

    @staticmethod
    def mpf(v):
        return np.float64(v) if np.ndim(v) == 0 else np.asarray(v, dtype=float)

    exp = staticmethod(np.exp)


NUMPY = NumpyContext()


def make_context(digits: int):
    ctx = mpmath.MPContext()
    ctx.dps = digits
    return ctx


class Site:
    """One evaluation location for a fixed tau, with per-site caches."""

    def __init__(self, tau: ExpPoly, x, times: Mapping[int, object], ctx):
        self.ctx = ctx
        self.tau = tau
        values = [_to_mpf(ctx, x)]
        for odd, v in times.items():
            s = slot_of(int(odd))
            if len(values) <= s:
                values.extend([ctx.mpf(0)] * (s + 1 - len(values)))
            values[s] = _to_mpf(ctx, v)
        self.values = values
        self._exp: dict = {}
        self._rho: dict = {}
        self._tau_value = None

    @property
    def x(self):
        return self.values[0]

    def exp_phase(self, phase: LinearPhase):
        v = self._exp.get(phase)
        if v is None:
            v = self._exp[phase] = (
                self.ctx.mpf(1) if phase.is_zero else self.ctx.exp(phase.value(self))
            )
        return v

    @property
    def tau_value(self):
        if self._tau_value is None:
            v = self.tau.evaluate_at(self)
            scale = self.tau.abs_scale_at(self)
            bad = abs(v) <= scale * self.ctx.mpf(10) ** (-(self.ctx.dps - 3))
            if bad.any() if hasattr(bad, "any") else bad:
                raise DenominatorZero(f"tau vanishes at x = {self.x}")
            self._tau_value = v
        return self._tau_value

    def rho(self, alpha: tuple):
        if not alpha:
            return self.ctx.mpf(1)
        v = self._rho.get(alpha)
        if v is None:
            v = self._rho[alpha] = tau_derivative(self.tau, alpha).evaluate_at(self) / self.tau_value
        return v


def _monomial_survives(tau: ExpPoly, mono: tuple) -> bool:
    return all(not tau_derivative(tau, alpha).is_zero() for alpha, _ in mono)


@lru_cache(maxsize=4096)
def tau_derivative(tau: ExpPoly, alpha: tuple) -> ExpPoly:
    if not alpha:
        return tau
    # peel one derivative so the cache is shared along chains of multi-indices
    slot = max(i for i, v in enumerate(alpha) if v)
    prev = list(alpha)
    prev[slot] -= 1
    return tau_derivative(tau, strip(prev)).diff(slot)


# ---------------------------------------------------------------- ratio ring

RatioMonomial = tuple  # ((alpha, exponent), ...) sorted by alpha


def _rmono_mul(a: RatioMonomial, b: RatioMonomial) -> RatioMonomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for alpha, e in b:
        d[alpha] = d.get(alpha, 0) + e
    return tuple(sorted(d.items()))


def _rmono_pow_drop(m: RatioMonomial, alpha) -> RatioMonomial:
    out = []
    for a, e in m:
        if a == alpha:
            if e > 1:
                out.append((a, e - 1))
        else:
            out.append((a, e))
    return tuple(out)


def _add_into(target: dict, key, c):
    v = target.get(key, 0) + c
    if v:
        target[key] = v
    else:
        target.pop(key, None)


class RatioPoly:
    """Polynomial in the tau ratios ``rho_a`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[RatioMonomial, Fraction] | None = None):
        self.coeffs = {m: Fraction(c) for m, c in (coeffs or {}).items() if c}

    @classmethod
    def constant(cls, c) -> "RatioPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def rho(cls, alpha, coeff=1) -> "RatioPoly":
        alpha = multi_index(alpha)
        if not alpha:
            return cls.constant(coeff)
        return cls({((alpha, 1),): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, RatioPoly) and self.coeffs == other.coeffs

    def __add__(self, other: "RatioPoly") -> "RatioPoly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            _add_into(out, m, c)
        return RatioPoly(out)

    def __neg__(self) -> "RatioPoly":
        return RatioPoly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "RatioPoly") -> "RatioPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatioPoly":
        if not isinstance(other, RatioPoly):
            f = Fraction(other)
            return RatioPoly({m: c * f for m, c in self.coeffs.items()})
        out: dict = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                _add_into(out, _rmono_mul(ma, mb), ca * cb)
        return RatioPoly(out)

    __rmul__ = __mul__

    def diff(self, slot: int = 0) -> "RatioPoly":
        """Derivative in x (slot 0) or in the time s_{2 slot + 1}."""
        out: dict = {}
        for m, c in self.coeffs.items():
            for key, cc in _diff_monomial(m, slot):
                _add_into(out, key, c * cc)
        return RatioPoly(out)

    def alphas(self) -> set:
        return {a for m in self.coeffs for a, _ in m}

    def evaluate_at(self, site: Site):
        return _eval_monomials(self.coeffs.items(), site)

    def __repr__(self) -> str:
        return f"RatioPoly({format_ratio_poly(self)})"


@lru_cache(maxsize=65536)
def _diff_monomial(m: RatioMonomial, slot: int) -> tuple:
    """d(monomial) as ((monomial, coeff), ...)."""
    e1 = unit(slot)
    out: dict = {}
    for alpha, e in m:
        rest = _rmono_pow_drop(m, alpha)
        up = mono_mul(alpha, e1)
        _add_into(out, _rmono_mul(rest, ((up, 1),)), e)
        _add_into(out, _rmono_mul(_rmono_mul(rest, ((alpha, 1),)), ((e1, 1),)), -e)
    return tuple(out.items())


def _eval_monomial(m: RatioMonomial, site: Site):
    v = site.ctx.mpf(1)
    for alpha, e in m:
        r = site.rho(alpha)
        v *= r if e == 1 else r**e
    return v


def _eval_monomials(items, site: Site):
    ctx = site.ctx
    total = ctx.mpf(0)
    for m, c in items:
        total += (ctx.mpf(c.numerator) / c.denominator) * _eval_monomial(m, site)
    return total


def format_ratio_monomial(m: RatioMonomial) -> str:
    if not m:
        return "1"
    parts = []
    for alpha, e in m:
        name = f"rho[{format_monomial(alpha, lambda s: 'd' + str(2 * s + 1))}]"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_ratio_poly(p: RatioPoly) -> str:
    if not p.coeffs:
        return "0"
    return " + ".join(f"({c})*{format_ratio_monomial(m)}" for m, c in sorted(p.coeffs.items()))


# ---------------------------------------------------------- expression types


class TauExpression:
    """A one-point function of ``(x, s)``: a :class:`RatioPoly` bound to a tau."""

    __slots__ = ("tau", "poly")

    def __init__(self, tau: ExpPoly, poly: RatioPoly):
        self.tau = tau
        self.poly = poly

    def diff(self, slot: int = 0) -> "TauExpression":
        return TauExpression(self.tau, self.poly.diff(slot))

    def __add__(self, other: "TauExpression") -> "TauExpression":
        return TauExpression(self.tau, self.poly + other.poly)

    def __sub__(self, other: "TauExpression") -> "TauExpression":
        return TauExpression(self.tau, self.poly - other.poly)

    def __mul__(self, other) -> "TauExpression":
        if isinstance(other, TauExpression):
            return TauExpression(self.tau, self.poly * other.poly)
        return TauExpression(self.tau, self.poly * other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.poly.is_zero()


class RatExpExpression:
    """Finite sum of ``c * (x - y)**p * A(x) * B(y)``.

    ``A`` and ``B`` are tau-ratio monomials at the two points, ``p`` is any
    integer (negative for poles on the diagonal).
    """

    __slots__ = ("tau", "terms")

    def __init__(self, tau: ExpPoly, terms: Mapping[tuple, Fraction] | None = None):
        self.tau = tau
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def from_product(cls, tau, a: RatioPoly, b: RatioPoly, power: int = 0, coeff=1) -> "RatExpExpression":
        out: dict = {}
        coeff = Fraction(coeff)
        for ma, ca in a.coeffs.items():
            for mb, cb in b.coeffs.items():
                _add_into(out, (power, ma, mb), coeff * ca * cb)
        return cls(tau, out)

    @classmethod
    def from_x(cls, tau, a: RatioPoly) -> "RatExpExpression":
        return cls.from_product(tau, a, RatioPoly.constant(1))

    def is_zero(self) -> bool:
        return not self.terms

    def reduced(self) -> "RatExpExpression":
        """Drop terms containing a ratio ``rho_alpha`` whose numerator vanishes identically."""
        keep = {k: c for k, c in self.terms.items()
                if _monomial_survives(self.tau, k[1]) and _monomial_survives(self.tau, k[2])}
        return RatExpExpression(self.tau, keep)

    @property
    def pole_order(self) -> int:
        return max((-p for p, _, _ in self.terms), default=0) if self.terms else 0

    def __add__(self, other: "RatExpExpression") -> "RatExpExpression":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return RatExpExpression(self.tau, out)

    def __neg__(self) -> "RatExpExpression":
        return RatExpExpression(self.tau, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "RatExpExpression") -> "RatExpExpression":
        return self + (-other)

    def __mul__(self, other) -> "RatExpExpression":
        if isinstance(other, RatExpExpression):
            out: dict = {}
            for (p1, a1, b1), c1 in self.terms.items():
                for (p2, a2, b2), c2 in other.terms.items():
                    _add_into(out, (p1 + p2, _rmono_mul(a1, a2), _rmono_mul(b1, b2)), c1 * c2)
            return RatExpExpression(self.tau, out)
        if isinstance(other, RatioPoly):
            return self * RatExpExpression.from_x(self.tau, other)
        f = Fraction(other)
        return RatExpExpression(self.tau, {k: c * f for k, c in self.terms.items()})

    __rmul__ = __mul__

    def shift_power(self, dp: int) -> "RatExpExpression":
        """Multiply by ``(x - y)**dp``."""
        return RatExpExpression(self.tau, {(p + dp, a, b): c for (p, a, b), c in self.terms.items()})

    def dx(self, order: int = 1) -> "RatExpExpression":
        out = self
        for _ in range(order):
            out = out._d(side=0)
        return out

    def dy(self, order: int = 1) -> "RatExpExpression":
        out = self
        for _ in range(order):
            out = out._d(side=1)
        return out

    def dtime(self, slot: int) -> "RatExpExpression":
        """Derivative in a common time (acts on both points)."""
        return self._d(side=0, slot=slot, power_rule=False) + self._d(side=1, slot=slot, power_rule=False)

    def _d(self, side: int, slot: int = 0, power_rule: bool = True) -> "RatExpExpression":
        out: dict = {}
        sign = 1 if side == 0 else -1
        for (p, a, b), c in self.terms.items():
            if p and power_rule:
                _add_into(out, (p - 1, a, b), sign * p * c)
            mono = a if side == 0 else b
            for m2, cc in _diff_monomial(mono, slot):
                key = (p, m2, b) if side == 0 else (p, a, m2)
                _add_into(out, key, c * cc)
        return RatExpExpression(self.tau, out)

    def swap(self) -> "RatExpExpression":
        """The expression with x and y exchanged."""
        return RatExpExpression(
            self.tau, {(p, b, a): c * (-1) ** (p % 2) for (p, a, b), c in self.terms.items()}
        )

    def diagonal(self) -> TauExpression:
        """Restriction to x = y; requires no poles."""
        if self.pole_order > 0:
            raise DiagonalEvaluation("expression has poles on the diagonal")
        out: dict = {}
        for (p, a, b), c in self.terms.items():
            if p == 0:
                _add_into(out, _rmono_mul(a, b), c)
        return TauExpression(self.tau, RatioPoly(out))

    def evaluate_sites(self, sx: Site, sy: Site):
        ctx = sx.ctx
        d = sx.x - sy.x
        if d == 0 and self.pole_order > 0:
            raise DiagonalEvaluation("x == y for an expression with negative powers of (x - y)")
        cache_a: dict = {}
        cache_b: dict = {}
        powers: dict = {}
        total = ctx.mpf(0)
        for (p, a, b), c in self.terms.items():
            if p > 0 and d == 0:
                continue
            va = cache_a.get(a)
            if va is None:
                va = cache_a[a] = _eval_monomial(a, sx)
            vb = cache_b.get(b)
            if vb is None:
                vb = cache_b[b] = _eval_monomial(b, sy)
            dp = powers.get(p)
            if dp is None:
                dp = powers[p] = d**p if p else ctx.mpf(1)
            total += (ctx.mpf(c.numerator) / c.denominator) * va * vb * dp
        return total

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"RatExpExpression({len(self.terms)} terms, pole order {self.pole_order})"


# ------------------------------------------------------------ public evaluate


def escalation_digits(distance, pole_order: int) -> int:
    """Extra digits absorbing cancellation of a pole of the given order."""
    if pole_order <= 0 or distance == 0:
        return 0
    d = float(abs(distance))
    if d >= 1:
        return 0
    return int(math.ceil(pole_order * math.log10(1 / d)))


def evaluate(expr, p: EvalPoint, y=None, *, guard: int = DEFAULT_GUARD, tau=None):
    """Evaluate a tau-function, ExpPoly, TauExpression or RatExpExpression.

    Work is carried at ``p.precision + guard`` digits; two-point expressions
    with poles add :func:`escalation_digits` for ``|x - y| < 1``.  Returns an
    mpf bound to a private mpmath context, so concurrent calls never share
    precision state.
    """
    digits = p.precision + guard
    if isinstance(expr, RatExpExpression):
        if y is None:
            raise ValueError("two-point expressions need y")
        probe = make_context(digits)
        dist = _to_mpf(probe, p.x) - _to_mpf(probe, y)
        if dist == 0 and expr.pole_order > 0:
            raise DiagonalEvaluation("x == y for an expression with negative powers of (x - y)")
        ctx = make_context(digits + escalation_digits(dist, expr.pole_order))
        sx = Site(expr.tau, p.x, p.times, ctx)
        sy = Site(expr.tau, y, p.times, ctx)
        return expr.evaluate_sites(sx, sy)
    ctx = make_context(digits)
    if isinstance(expr, TauExpression):
        return expr.poly.evaluate_at(Site(expr.tau, p.x, p.times, ctx))
    if isinstance(expr, RatioPoly):
        if tau is None:
            raise ValueError("a bare RatioPoly needs tau=")
        return expr.evaluate_at(Site(tau, p.x, p.times, ctx))
    if isinstance(expr, ExpPoly):
        site = Site(expr, p.x, p.times, ctx)
        return expr.evaluate_at(site)
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


# ---------------------------------------------------------------- potential


def log_tau_dx2() -> RatioPoly:
    """d_x^2 log tau = rho_xx - rho_x**2."""
    return RatioPoly.rho((2,)) - RatioPoly.rho((1,)) * RatioPoly.rho((1,))


def potential(tau: ExpPoly) -> TauExpression:
    """u = 2 d_x^2 log tau."""
    return TauExpression(tau, log_tau_dx2() * 2)
