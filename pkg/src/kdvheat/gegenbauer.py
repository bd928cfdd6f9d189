"""Gegenbauer polynomials for arbitrary rational parameter and the P_{n,j} family.

Everything here is exact: :class:`UniPoly` holds ascending
:class:`~fractions.Fraction` coefficients in ``w``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def shifted_power(cls, k: int, shift=1) -> "UniPoly":
        """``(w - shift)**k``."""
        s = Fraction(shift)
        return cls([comb(k, i) * (-s) ** (k - i) for i in range(k + 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            f = Fraction(other)
            return UniPoly(c * f for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __call__(self, w):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc

    def reflect(self) -> "UniPoly":
        """``p(-w)``."""
        return UniPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def parity(self):
        """0 for even, 1 for odd, None if neither (the zero polynomial is even)."""
        if all(c == 0 for c in self.coeffs[1::2]):
            return 0
        if all(c == 0 for c in self.coeffs[0::2]):
            return 1
        return None

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"


def gbinom(alpha, k: int) -> Fraction:
    """Generalized binomial ``alpha (alpha-1) ... (alpha-k+1) / k!``."""
    if k < 0:
        return Fraction(0)
    alpha = Fraction(alpha)
    num = Fraction(1)
    for i in range(k):
        num *= alpha - i
    return num / factorial(k)


def pochhammer(alpha, k: int) -> Fraction:
    """Rising factorial, with ``(alpha)_0 = 1``."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(alpha) + i
    return out


def double_factorial(m: int) -> int:
    """``m!!`` for ``m >= -1`` with ``(-1)!! = 0!! = 1``.

    Negative arguments below -1 are rejected rather than extended.
    """
    if m < -1:
        raise ValueError(f"double factorial undefined for {m}")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@lru_cache(maxsize=None)
def gegenbauer_def(n: int, lam) -> UniPoly:
    """Expansion of C_n^lam in powers of (w - 1); valid for any rational lam."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    lam = Fraction(lam)
    out = UniPoly()
    for k in range(n + 1):
        c = 2**k * gbinom(lam + k - 1, k) * gbinom(2 * lam + n + k - 1, n - k)
        if c:
            out = out + UniPoly.shifted_power(k) * c
    return out


@lru_cache(maxsize=None)
def gegenbauer_rec(n: int, lam) -> UniPoly:
    """C_n^lam from the three-term recurrence started at 1 and 2*lam*w."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    lam = Fraction(lam)
    prev, cur = UniPoly.constant(1), UniPoly([0, 2 * lam])
    if n == 0:
        return prev
    w = UniPoly([0, 1])
    for m in range(1, n):
        nxt = (w * cur * (2 * (m + lam)) - prev * (m + 2 * lam - 1)) * Fraction(1, m + 1)
        prev, cur = cur, nxt
    return cur


def _check_nj(n: int, j: int):
    if n < 1 or not 0 <= j <= 2 * n - 1:
        raise ValueError(f"need n >= 1 and 0 <= j <= 2n-1, got n={n}, j={j}")


@lru_cache(maxsize=None)
def pnj(n: int, j: int) -> UniPoly:
    """P_{n,j}(w) = sum_k 2^k C(j,k) (2n-2-k)!/(n-k-1)! (w-1)^(j-k)."""
    _check_nj(n, j)
    out = UniPoly()
    for k in range(min(n - 1, j) + 1):
        c = 2**k * comb(j, k) * Fraction(factorial(2 * n - 2 - k), factorial(n - k - 1))
        out = out + UniPoly.shifted_power(j - k) * c
    return out


@lru_cache(maxsize=None)
def pnj_reindexed(n: int, j: int) -> UniPoly:
    """The same polynomial summed over the power k of (w - 1)."""
    _check_nj(n, j)
    out = UniPoly()
    for k in range(max(0, j - n + 1), j + 1):
        c = 2 ** (j - k) * comb(j, k) * Fraction(factorial(2 * n - j - 2 + k), factorial(n - j + k - 1))
        out = out + UniPoly.shifted_power(k) * c
    return out


def pnj_gegenbauer_form(n: int, j: int) -> UniPoly:
    """P_{n,j} written through C_j^{n-j-1/2} (0 <= j <= 2n-2) or, for j = 2n-1,
    through C_{2n-1}^{-n+1/2} + 1."""
    _check_nj(n, j)
    lam = Fraction(2 * n - 2 * j - 1, 2)
    if j <= n - 1:
        return gegenbauer_rec(j, lam) * (factorial(j) * 2 ** (n - 1) * double_factorial(2 * n - 2 * j - 3))
    if j <= 2 * n - 2:
        c = Fraction((-1) ** (j - n + 1) * factorial(j) * 2 ** (n - 1), double_factorial(2 * j - 2 * n + 1))
        return gegenbauer_rec(j, lam) * c
    c = (-1) ** n * 2 ** (n - 1) * double_factorial(2 * n - 2)
    return (gegenbauer_rec(2 * n - 1, Fraction(1 - 2 * n, 2)) + 1) * c


def pnj_gegenbauer_identity(n: int, j: int) -> bool:
    """Exact check that P_{n,j} equals its Gegenbauer form (and both index forms agree)."""
    p = pnj(n, j)
    return p == pnj_reindexed(n, j) and p == pnj_gegenbauer_form(n, j)
