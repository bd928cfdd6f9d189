"""Exact multivariate polynomials in x = s1 and the odd times s3, s5, ...

Exponent vectors are tuples indexed by *slot*: slot 0 is x (identified with
s1), slot i is the odd time s_{2i+1}.  Trailing zeros are always stripped so
that equal monomials hash equally.  The same tuple layout doubles as a
multi-index of time derivatives (see :mod:`kdvheat.schur`).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple


def slot_of(odd_index: int) -> int:
    if odd_index < 1 or odd_index % 2 == 0:
        raise ValueError(f"time index must be a positive odd integer, got {odd_index}")
    return (odd_index - 1) // 2


def odd_of(slot: int) -> int:
    return 2 * slot + 1


def strip(exps: Iterable[int]) -> Monomial:
    e = list(exps)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return tuple(out)


def unit(slot: int, power: int = 1) -> Monomial:
    return strip([0] * slot + [power])


def multi_index(spec) -> Monomial:
    """Normalize ``{odd_index: order}`` or a slot tuple into a slot tuple."""
    if isinstance(spec, Mapping):
        out = []
        for odd, order in spec.items():
            if order < 0:
                raise ValueError("derivative orders must be nonnegative")
            s = slot_of(int(odd))
            if len(out) <= s:
                out.extend([0] * (s + 1 - len(out)))
            out[s] += int(order)
        return strip(out)
    exps = tuple(int(v) for v in spec)
    if any(v < 0 for v in exps):
        raise ValueError("derivative orders must be nonnegative")
    return strip(exps)


class Poly:
    """Sparse polynomial with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for mono, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                mono = strip(mono)
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.coeffs = clean
        self._hash = None

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def variable(cls, slot: int) -> "Poly":
        return cls({unit(slot): Fraction(1)})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            f = Fraction(other)
            return Poly({m: c * f for m, c in self.coeffs.items()})
        out: dict = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        return all(not m for m in self.coeffs)

    def constant_term(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def max_slot(self) -> int:
        return max((len(m) for m in self.coeffs), default=0)

    def diff(self, slot: int) -> "Poly":
        out = {}
        for m, c in self.coeffs.items():
            if len(m) > slot and m[slot]:
                e = list(m)
                e[slot] -= 1
                out[strip(e)] = c * m[slot]
        return Poly(out)

    def evaluate(self, values, ctx):
        """``values[slot]`` holds the numeric value of each slot variable."""
        total = ctx.mpf(0)
        for m, c in self.coeffs.items():
            t = ctx.mpf(c.numerator) / c.denominator
            for slot, e in enumerate(m):
                if e:
                    t *= values[slot] ** e if slot < len(values) else 0
            total += t
        return total

    def sorted_items(self):
        return sorted(self.coeffs.items())

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"


def format_monomial(m: Monomial, names=None) -> str:
    parts = []
    for slot, e in enumerate(m):
        if not e:
            continue
        name = names(slot) if names else ("x" if slot == 0 else f"s{odd_of(slot)}")
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def parse_monomial(text: str) -> Monomial:
    text = text.strip()
    if text in ("", "1"):
        return ()
    exps: list[int] = []
    for factor in text.split("*"):
        factor = factor.strip()
        name, _, power = factor.partition("^")
        name = name.strip()
        if name == "x":
            slot = 0
        elif name.startswith("s") and name[1:].isdigit():
            slot = slot_of(int(name[1:]))
        else:
            raise ValueError(f"unknown variable {name!r} in monomial {text!r}")
        if len(exps) <= slot:
            exps.extend([0] * (slot + 1 - len(exps)))
        exps[slot] += int(power) if power else 1
    return strip(exps)


def format_poly(p: Poly, names=None) -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for m, c in p.sorted_items():
        mono = format_monomial(m, names)
        if mono == "1":
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"({c})*{mono}")
    return " + ".join(parts)
