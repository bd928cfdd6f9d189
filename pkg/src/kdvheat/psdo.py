"""Pseudo-differential operators over differential polynomials in u.

A :class:`DiffPoly` is a polynomial in ``u, u', u'', ...`` with a derivation
``D``.  A :class:`PsdOp` is ``sum_m a_m d^m``; operators with negative orders
are truncated and carry ``lowest``, the smallest order whose coefficient is
known exactly (``None`` for an exact, finite operator).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .errors import NotMultiplicationOperator, TruncationExceeded
from .gegenbauer import gbinom
from .polynomial import mono_mul, strip

DerivMonomial = tuple  # exponent of u^(i) at position i


def _deriv_name(i: int) -> str:
    return "u" + "'" * i if i <= 3 else f"u^({i})"


class DiffPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[DerivMonomial, Fraction] | None = None):
        out = {}
        for m, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                m = strip(m)
                v = out.get(m, 0) + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        self.coeffs = out

    @classmethod
    def constant(cls, c) -> "DiffPoly":
        return cls({(): c})

    @classmethod
    def u(cls, order: int = 0) -> "DiffPoly":
        return cls({(0,) * order + (1,): 1})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            other = DiffPoly.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return DiffPoly(out)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other) -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            f = Fraction(other)
            return DiffPoly({m: c * f for m, c in self.coeffs.items()})
        out: dict = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return DiffPoly(out)

    __rmul__ = __mul__

    def D(self, times: int = 1) -> "DiffPoly":
        p = self
        for _ in range(times):
            p = _derive(p)
        return p

    def max_order(self) -> int:
        return max((len(m) - 1 for m in self.coeffs), default=-1)

    def evaluate(self, values):
        """``values[i]`` is the numeric value of u^(i)."""
        one = values[0] * 0 + 1
        total = one * 0
        for m, c in self.coeffs.items():
            t = one
            for i, e in enumerate(m):
                if e:
                    t = t * values[i] ** e
            total = total + c.numerator * t / c.denominator
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items(), key=lambda mc: (sum(mc[0]), mc[0])):
            factors = [
                _deriv_name(i) if e == 1 else f"{_deriv_name(i)}^{e}" for i, e in enumerate(m) if e
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"({c})*" + "*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


def _derive(p: DiffPoly) -> DiffPoly:
    out: dict = {}
    for m, c in p.coeffs.items():
        for i, e in enumerate(m):
            if not e:
                continue
            nm = list(m) + [0]
            nm[i] -= 1
            nm[i + 1] += 1
            key = strip(nm)
            out[key] = out.get(key, 0) + c * e
    return DiffPoly(out)


class PsdOp:
    __slots__ = ("coeffs", "lowest")

    def __init__(self, coeffs: Mapping[int, DiffPoly] | None = None, lowest: int | None = None):
        self.coeffs = {
            m: a for m, a in (coeffs or {}).items() if not a.is_zero() and (lowest is None or m >= lowest)
        }
        self.lowest = lowest

    @classmethod
    def d(cls, order: int = 1) -> "PsdOp":
        return cls({order: DiffPoly.constant(1)})

    @classmethod
    def mult(cls, a: DiffPoly) -> "PsdOp":
        return cls({0: a})

    @property
    def exact(self) -> bool:
        return self.lowest is None

    @property
    def top(self) -> int | None:
        return max(self.coeffs, default=None)

    def coeff(self, m: int) -> DiffPoly:
        if self.lowest is not None and m < self.lowest:
            raise TruncationExceeded(f"order {m} is below the tracked truncation {self.lowest}")
        return self.coeffs.get(m, DiffPoly())

    def __eq__(self, other) -> bool:
        return isinstance(other, PsdOp) and self.coeffs == other.coeffs and self.lowest == other.lowest

    def __add__(self, other: "PsdOp") -> "PsdOp":
        low = _max_low(self.lowest, other.lowest)
        out = dict(self.coeffs)
        for m, a in other.coeffs.items():
            out[m] = out[m] + a if m in out else a
        return PsdOp(out, low)

    def __neg__(self) -> "PsdOp":
        return PsdOp({m: -a for m, a in self.coeffs.items()}, self.lowest)

    def __sub__(self, other: "PsdOp") -> "PsdOp":
        return self + (-other)

    def scale(self, c) -> "PsdOp":
        return PsdOp({m: a * c for m, a in self.coeffs.items()}, self.lowest)

    def plus_part(self) -> "PsdOp":
        if self.lowest is not None and self.lowest > 0:
            raise TruncationExceeded("differential part not fully known")
        return PsdOp({m: a for m, a in self.coeffs.items() if m >= 0})

    def minus_part(self) -> "PsdOp":
        return PsdOp({m: a for m, a in self.coeffs.items() if m < 0}, self.lowest)

    def truncate(self, lowest: int) -> "PsdOp":
        return PsdOp(self.coeffs, _max_low(self.lowest, lowest))

    def is_differential(self) -> bool:
        return self.exact and all(m >= 0 for m in self.coeffs)

    def adjoint(self) -> "PsdOp":
        """Formal adjoint (a d^m)* = (-d)^m o a, for differential operators."""
        if not self.is_differential():
            raise ValueError("adjoint is implemented for differential operators only")
        out = PsdOp()
        for m, a in self.coeffs.items():
            out = out + psdo_mul(PsdOp.d(m).scale((-1) ** m), PsdOp.mult(a))
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"[{a}]*d^{m}" for m, a in sorted(self.coeffs.items(), reverse=True)]
        tail = "" if self.lowest is None else f" + O(d^{self.lowest - 1})"
        return " + ".join(parts) + tail

    __repr__ = __str__


def _max_low(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def psdo_mul(a: PsdOp, b: PsdOp, depth: int | None = None) -> PsdOp:
    """Composition ``a o b`` via ``d^m o f = sum_i C(m, i) (D^i f) d^(m-i)``.

    The result is exact when both factors are differential; otherwise it is
    computed down to ``-depth`` (default: as far as the factors' truncations
    allow) and :class:`TruncationExceeded` is raised if ``depth`` asks for more.
    """
    if not a.coeffs or not b.coeffs:
        return PsdOp({}, _max_low(a.lowest, b.lowest))
    top_a, top_b = a.top, b.top
    trust = None
    if a.lowest is not None:
        trust = a.lowest + top_b
    if b.lowest is not None:
        trust = _max_low(trust, b.lowest + top_a)
    infinite = any(m < 0 for m in a.coeffs)
    if depth is not None:
        floor = -depth
        if trust is not None and floor < trust:
            raise TruncationExceeded(f"requested order {floor} but factors only determine order >= {trust}")
        low = floor if (infinite or trust is not None) else None
    else:
        if trust is None and infinite:
            raise TruncationExceeded("product with an integral operator needs a depth")
        floor = trust
        low = trust
    out: dict = {}
    for m, f in a.coeffs.items():
        for n, g in b.coeffs.items():
            i = 0
            while True:
                order = m + n - i
                if floor is not None and order < floor:
                    break
                if m >= 0 and i > m:
                    break
                c = gbinom(m, i)
                if c:
                    term = f * g.D(i) * c
                    out[order] = out[order] + term if order in out else term
                i += 1
    return PsdOp(out, low)


def schrodinger() -> PsdOp:
    """L = d^2 + u."""
    return PsdOp({2: DiffPoly.constant(1), 0: DiffPoly.u()})


@lru_cache(maxsize=None)
def sqrt_L(depth: int) -> PsdOp:
    """L^(1/2) = d + sum_{i>=1} a_i d^-i, known through order -depth."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    L = schrodinger()
    coeffs = {1: DiffPoly.constant(1)}
    for r in range(1, depth + 1):
        known = PsdOp(dict(coeffs))
        sq = psdo_mul(known, known, depth=r - 1) if r > 1 else psdo_mul(known, known)
        target = L.coeffs.get(1 - r, DiffPoly())
        coeffs[-r] = (target - sq.coeffs.get(1 - r, DiffPoly())) * Fraction(1, 2)
    return PsdOp(coeffs, -depth)


def psdo_pow(op: PsdOp, k: int, depth: int | None = None) -> PsdOp:
    if k < 1:
        raise ValueError("power must be positive")
    out = op
    for _ in range(k - 1):
        out = psdo_mul(out, op, depth=None)
    if depth is not None:
        out = out.truncate(-depth)
    return out


def fractional_power(j: int, depth: int) -> PsdOp:
    """L^(j/2), known through order -depth + (j - 1)."""
    return psdo_pow(sqrt_L(depth), j)


def commutator(a: PsdOp, b: PsdOp, depth: int | None = None) -> PsdOp:
    return psdo_mul(a, b, depth) - psdo_mul(b, a, depth)


@lru_cache(maxsize=None)
def lax_rhs(j: int, depth: int | None = None) -> DiffPoly:
    """[(L^(j/2))_+, L] as a multiplication operator."""
    if j < 1 or j % 2 == 0:
        raise ValueError("j must be an odd positive integer")
    depth = j + 2 if depth is None else depth
    if depth < j + 2:
        raise TruncationExceeded(f"depth {depth} < j + 2")
    plus = fractional_power(j, depth).plus_part()
    comm = commutator(plus, schrodinger())
    positive = {m: a for m, a in comm.coeffs.items() if m != 0}
    if positive:
        raise NotMultiplicationOperator(f"nonzero orders {sorted(positive)} in [(L^{j}/2)_+, L]")
    return comm.coeffs.get(0, DiffPoly())


def lax_vs_wkernel(tau, n: int, x, times=None, precision: int = 30):
    """|[(L^((2n-1)/2))_+, L] - 2 d_x W_{2n}(x, x)| at x for the potential of tau."""
    from .expr import Site, make_context
    from .oracle import PotentialEvaluator
    from .sato import w_coeff

    rhs = lax_rhs(2 * n - 1)
    ctx = make_context(precision + 10)
    site = Site(tau, x, times or {}, ctx)
    pot = PotentialEvaluator(tau)
    values = [pot.derivative(i).evaluate_at(site) for i in range(max(rhs.max_order(), 0) + 1)]
    lhs = rhs.evaluate(values) if not rhs.is_zero() else ctx.mpf(0)
    kernel = w_coeff(tau, 2 * n).diagonal().poly.diff(0).evaluate_at(site) * 2
    return abs(lhs - kernel)
