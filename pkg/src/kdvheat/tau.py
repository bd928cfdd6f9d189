"""Exponential-polynomial tau-functions of the KdV hierarchy.

A tau-function is stored as a finite sum ``sum_i P_i(x, s3, s5, ...) exp(phi_i)``
with exact rational data.  ``x`` and ``s1`` are the same coordinate.  A phase
``phi`` is linear in all times; its coefficient on ``s_{2j-1}`` is an explicit
rational plus an optional *dispersion* part ``sum_r weight_r * k_r**(2j-1)``,
which defines the coefficient for every odd time at once (solitons).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateWavenumber, UnsupportedLevel
from .polynomial import Poly, multi_index, odd_of, strip

Rational = Fraction


def as_fraction(q) -> Fraction:
    if isinstance(q, float):
        # read floats as the decimal literal they print as
        return Fraction(repr(q))
    return Fraction(q)


@dataclass(frozen=True)
class LinearPhase:
    explicit: tuple = ()
    modes: tuple = ()  # sorted ((k, weight), ...)
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "explicit", strip(Fraction(c) for c in self.explicit))
        merged: dict = {}
        for k, w in self.modes:
            k, w = Fraction(k), Fraction(w)
            merged[k] = merged.get(k, Fraction(0)) + w
        object.__setattr__(
            self, "modes", tuple(sorted((k, w) for k, w in merged.items() if w and k))
        )
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[int, object], constant=0) -> "LinearPhase":
        """``coeffs`` maps odd time index (1 for x) to its coefficient."""
        mi: list = []
        for odd, c in coeffs.items():
            slot = (int(odd) - 1) // 2
            if len(mi) <= slot:
                mi.extend([Fraction(0)] * (slot + 1 - len(mi)))
            mi[slot] += as_fraction(c)
        return cls(tuple(mi), (), as_fraction(constant))

    @property
    def coeff_x(self) -> Fraction:
        return self.coefficient(0)

    @property
    def is_zero(self) -> bool:
        return not self.explicit and not self.modes and not self.constant

    def coefficient(self, slot: int) -> Fraction:
        c = self.explicit[slot] if slot < len(self.explicit) else Fraction(0)
        if self.modes:
            p = odd_of(slot)
            c += sum(w * k**p for k, w in self.modes)
        return c

    def __add__(self, other: "LinearPhase") -> "LinearPhase":
        n = max(len(self.explicit), len(other.explicit))
        a = self.explicit + (Fraction(0),) * (n - len(self.explicit))
        b = other.explicit + (Fraction(0),) * (n - len(other.explicit))
        return LinearPhase(
            tuple(u + v for u, v in zip(a, b)),
            self.modes + other.modes,
            self.constant + other.constant,
        )

    def value(self, site) -> object:
        ctx = site.ctx
        v = ctx.mpf(self.constant.numerator) / self.constant.denominator
        for slot, s in enumerate(site.values):
            c = self.coefficient(slot)
            if c and (slot == 0 or s):
                v += (ctx.mpf(c.numerator) / c.denominator) * s
        return v


@dataclass(frozen=True)
class ExpPolyTerm:
    prefactor: Poly
    phase: LinearPhase


class ExpPoly:
    """Finite sum of :class:`ExpPolyTerm` with pairwise distinct phases."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[LinearPhase, Poly] | Iterable[ExpPolyTerm] = ()):
        grouped: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else (
            (t.phase, t.prefactor) for t in terms
        )
        for phase, pre in items:
            grouped[phase] = grouped.get(phase, Poly()) + pre
        self._terms = {ph: p for ph, p in grouped.items() if p}
        self._hash = None

    @classmethod
    def constant(cls, c) -> "ExpPoly":
        return cls({LinearPhase(): Poly.constant(c)})

    @property
    def terms(self) -> tuple:
        return tuple(ExpPolyTerm(p, ph) for ph, p in self._terms.items())

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        out = dict(self._terms)
        for ph, p in other._terms.items():
            out[ph] = out[ph] + p if ph in out else p
        return ExpPoly(out)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly({ph: -p for ph, p in self._terms.items()})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other) -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return ExpPoly({ph: p * other for ph, p in self._terms.items()})
        out: dict = {}
        for pa, qa in self._terms.items():
            for pb, qb in other._terms.items():
                ph = pa + pb
                out[ph] = out[ph] + qa * qb if ph in out else qa * qb
        return ExpPoly(out)

    __rmul__ = __mul__

    def diff(self, slot: int, order: int = 1) -> "ExpPoly":
        terms = self._terms
        for _ in range(order):
            out: dict = {}
            for ph, p in terms.items():
                c = ph.coefficient(slot)
                d = p.diff(slot)
                if c:
                    d = d + p * c
                if d:
                    out[ph] = d
            terms = out
        return ExpPoly(terms)

    def derivative(self, mi) -> "ExpPoly":
        mi = multi_index(mi)
        out = self
        for slot, order in enumerate(mi):
            if order:
                out = out.diff(slot, order)
        return out

    def evaluate_at(self, site):
        """Value at a prepared evaluation site (see :mod:`kdvheat.expr`)."""
        ctx = site.ctx
        total = ctx.mpf(0)
        for ph, p in self._terms.items():
            total += p.evaluate(site.values, ctx) * site.exp_phase(ph)
        return total

    def abs_scale_at(self, site):
        """Sum of absolute term values, used to detect cancellation to zero."""
        ctx = site.ctx
        return sum(
            (abs(p.evaluate(site.values, ctx) * site.exp_phase(ph)) for ph, p in self._terms.items()),
            ctx.mpf(0),
        )

    def __repr__(self) -> str:
        return f"ExpPoly({len(self._terms)} terms)"


TIME_RULES = ("explicit", "dispersion")


class TauFunction(ExpPoly):
    """A nonzero exponential polynomial tagged with its time rule.

    Under ``"explicit"`` every phase has finitely many time coefficients and
    derivatives in unlisted times vanish.  ``"dispersion"`` allows phases with
    wavenumber modes, differentiable in every odd time.
    """

    __slots__ = ("time_rule",)

    def __init__(self, terms=(), time_rule: str = "explicit"):
        super().__init__(terms)
        if time_rule not in TIME_RULES:
            raise ValueError(f"time_rule must be one of {TIME_RULES}")
        if self.is_zero():
            raise ValueError("tau-function must not be identically zero")
        if time_rule == "explicit" and any(ph.modes for ph in self._terms):
            raise ValueError("phases with wavenumber modes need time_rule='dispersion'")
        self.time_rule = time_rule

    def __eq__(self, other) -> bool:
        return super().__eq__(other)

    __hash__ = ExpPoly.__hash__

    def __repr__(self) -> str:
        return f"TauFunction({len(self._terms)} terms, time_rule={self.time_rule!r})"


def differentiate(tau: ExpPoly, mi) -> ExpPoly:
    """Exact mixed derivative ``prod_j d_{2j-1}^{m_j} tau``.

    ``mi`` is ``{odd_index: order}`` (``1`` is x) or a slot tuple.
    """
    return tau.derivative(mi)


def make_soliton(wavenumbers: Sequence, phase_constants: Sequence | None = None) -> TauFunction:
    """N-soliton tau-function.

    ``tau = sum_{I} prod_{i<j in I} A_ij exp(sum_{i in I} eta_i)`` with
    ``eta_i = 2 sum_j k_i**(2j-1) s_{2j-1} + c_i`` and
    ``A_ij = ((k_i - k_j) / (k_i + k_j))**2``.
    """
    ks = [as_fraction(k) for k in wavenumbers]
    cs = [as_fraction(c) for c in (phase_constants if phase_constants is not None else [0] * len(ks))]
    if len(cs) != len(ks):
        raise ValueError("need one phase constant per wavenumber")
    if any(k == 0 for k in ks):
        raise DuplicateWavenumber("wavenumbers must be nonzero")
    if len({abs(k) for k in ks}) != len(ks):
        raise DuplicateWavenumber(f"wavenumbers must have distinct absolute values: {ks}")
    terms: dict = {}
    idx = range(len(ks))
    for r in range(len(ks) + 1):
        for subset in combinations(idx, r):
            coeff = Fraction(1)
            for i, j in combinations(subset, 2):
                coeff *= ((ks[i] - ks[j]) / (ks[i] + ks[j])) ** 2
            phase = LinearPhase((), tuple((ks[i], 2) for i in subset), sum((cs[i] for i in subset), Fraction(0)))
            terms[phase] = Poly.constant(coeff)
    return TauFunction(terms, "dispersion" if ks else "explicit")


MAX_RATIONAL_LEVEL = 5


def make_rational_tau(level: int) -> TauFunction:
    """Polynomial (Adler-Moser) tau-function of the given level.

    The staircase Schur function for the partition ``(level, level-1, ..., 1)``
    in the odd times, scaled so its top power of x is monic: ``x`` for level 1,
    ``x**3 - 3*s3`` for level 2.
    """
    from .schur import schur_poly

    if not isinstance(level, int) or level < 1 or level > MAX_RATIONAL_LEVEL:
        raise UnsupportedLevel(f"rational level must be in 1..{MAX_RATIONAL_LEVEL}, got {level}")
    lam = list(range(level, 0, -1))
    size = len(lam)

    def entry(i, j):
        k = lam[i] - i + j
        return schur_poly(k) if k >= 0 else Poly()

    det = _poly_det([[entry(i, j) for j in range(size)] for i in range(size)])
    top = level * (level + 1) // 2
    lead = det.coeffs[(top,)]
    return TauFunction({LinearPhase(): det * (1 / lead)}, "explicit")


def _poly_det(rows: list) -> Poly:
    if len(rows) == 1:
        return rows[0][0]
    total = Poly()
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _poly_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def free_tau() -> TauFunction:
    return TauFunction({LinearPhase(): Poly.constant(1)})
