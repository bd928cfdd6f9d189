"""Elementary Schur polynomials in the odd times and their operator form.

``sum_k S_k(s) z**k = exp(sum_j s_{2j-1} z**(2j-1))``.  Substituting
``s_m -> +-d_m / m`` turns ``S_k`` into a constant-coefficient differential
operator in the times, which is how it acts on tau-functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .expr import RatioPoly
from .polynomial import Poly, format_poly, odd_of, strip
from .tau import ExpPoly

DEFAULT_MAX_ORDER = 24


def weight(mi: tuple) -> int:
    return sum(odd_of(slot) * m for slot, m in enumerate(mi))


@lru_cache(maxsize=None)
def odd_partitions(k: int) -> tuple:
    """Exponent vectors ``(m_1, m_3, m_5, ...)`` of weight k, lexicographic order."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    if k == 0:
        return ((),)
    top = (k - 1) // 2  # largest usable slot
    out = []

    def rec(slot: int, remaining: int, acc: list):
        if slot < 0:
            if remaining == 0:
                out.append(strip(acc))
            return
        part = odd_of(slot)
        for m in range(remaining // part + 1):
            acc[slot] = m
            rec(slot - 1, remaining - m * part, acc)
        acc[slot] = 0

    rec(top, k, [0] * (top + 1))
    return tuple(sorted(out, key=lambda mi: mi + (0,) * (top + 1 - len(mi))))


def _normalize_sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be + or -, got {sign!r}")


@lru_cache(maxsize=None)
def schur_poly(k: int) -> Poly:
    coeffs = {}
    for mi in odd_partitions(k):
        c = Fraction(1)
        for m in mi:
            c /= factorial(m)
        coeffs[mi] = c
    return Poly(coeffs)


@dataclass(frozen=True)
class SchurOperator:
    """``S_k(+-d~)`` as ``((alpha, c_alpha), ...)`` over odd multi-indices."""

    order: int
    sign: int
    terms: tuple

    def __str__(self) -> str:
        return format_poly(Poly(dict(self.terms)), lambda s: f"d{odd_of(s)}")


@lru_cache(maxsize=None)
def schur_operator(k: int, sign=1) -> SchurOperator:
    sgn = _normalize_sign(sign)
    terms = []
    for mi in odd_partitions(k):
        c = Fraction(1)
        for slot, m in enumerate(mi):
            c /= Fraction(odd_of(slot)) ** m * factorial(m)
        if sgn < 0 and sum(mi) % 2:
            c = -c
        terms.append((mi, c))
    return SchurOperator(k, sgn, tuple(terms))


def schur_apply(tau: ExpPoly, k: int, sign=1) -> ExpPoly:
    """``S_k(+-d~) tau`` as an exponential polynomial."""
    if k == 0:
        return tau
    out = ExpPoly()
    for mi, c in schur_operator(k, sign).terms:
        out = out + tau.derivative(mi) * c
    return out


@lru_cache(maxsize=None)
def schur_ratio(k: int, sign=1) -> RatioPoly:
    """``S_k(+-d~) tau / tau`` in the tau-ratio ring (independent of tau)."""
    out = RatioPoly.constant(0)
    for mi, c in schur_operator(k, sign).terms:
        out = out + RatioPoly.rho(mi, c)
    return out
