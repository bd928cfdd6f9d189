from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdvheat.gegenbauer import (
    UniPoly,
    double_factorial,
    gbinom,
    gegenbauer_def,
    gegenbauer_rec,
    pnj,
    pnj_gegenbauer_form,
    pnj_gegenbauer_identity,
    pnj_reindexed,
    pochhammer,
)

LAMBDAS = [Fraction(1), Fraction(1, 2), Fraction(3, 2), Fraction(-1, 2), Fraction(-3, 2),
           Fraction(-5, 2), Fraction(-7, 3), Fraction(2, 5), Fraction(-1)]


def test_helpers():
    assert [double_factorial(m) for m in (-1, 0, 1, 2, 5, 6)] == [1, 1, 1, 2, 15, 48]
    with pytest.raises(ValueError):
        double_factorial(-3)
    assert gbinom(Fraction(-1, 2), 2) == Fraction(3, 8)
    assert gbinom(5, 7) == 0
    assert pochhammer(3, 0) == 1 and pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)


def test_unipoly_basics():
    p = UniPoly.shifted_power(2)
    assert p == UniPoly([1, -2, 1])
    assert p(3) == 4
    assert p.reflect() == UniPoly([1, 2, 1])
    assert UniPoly([0, 1, 0, 5]).parity() == 1
    assert UniPoly([1, 0, 5]).parity() == 0
    assert UniPoly([1, 1]).parity() is None


@pytest.mark.parametrize("make", [gegenbauer_def, gegenbauer_rec])
def test_gegenbauer_examples(make):
    lam = Fraction(3, 7)
    assert make(0, lam) == UniPoly.constant(1)
    assert make(1, lam) == UniPoly([0, 2 * lam])
    assert make(2, lam) == UniPoly([-lam, 0, 2 * lam * (1 + lam)])
    assert make(3, 1) == UniPoly([0, -4, 0, 8])
    assert make(1, Fraction(1, 2)) == UniPoly([0, 1])


def test_negative_degree_rejected():
    for make in (gegenbauer_def, gegenbauer_rec):
        with pytest.raises(ValueError):
            make(-1, 1)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_definition_equals_recurrence(lam):
    for n in range(13):
        assert gegenbauer_def(n, lam) == gegenbauer_rec(n, lam)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_parity(lam):
    for n in range(10):
        c = gegenbauer_rec(n, lam)
        assert c.reflect() == c * (-1) ** n
        assert c.parity() in (n % 2, 0 if c == UniPoly() else n % 2)


def test_matches_classical_values():
    for lam in (Fraction(1, 2), Fraction(3, 2), Fraction(2, 5)):
        for n in range(8):
            for w in (Fraction(-3, 4), Fraction(1, 3), Fraction(9, 10)):
                ref = mpmath.gegenbauer(n, float(lam), float(w))
                assert abs(float(gegenbauer_rec(n, lam)(w)) - ref) < 1e-10 * max(1, abs(ref))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10), st.fractions(min_value=-4, max_value=4, max_denominator=6))
def test_definition_equals_recurrence_random(n, lam):
    assert gegenbauer_def(n, lam) == gegenbauer_rec(n, lam)


def test_pnj_examples():
    assert pnj(1, 0) == UniPoly.constant(1)
    assert pnj_gegenbauer_identity(1, 0)
    with pytest.raises(ValueError):
        pnj(2, 4)
    with pytest.raises(ValueError):
        pnj(0, 0)


def test_index_forms_agree():
    for n in range(1, 9):
        for j in range(2 * n):
            assert pnj(n, j) == pnj_reindexed(n, j)


@pytest.mark.parametrize("branch", ["low", "middle", "top"])
def test_gegenbauer_forms_exhaustive(branch):
    for n in range(1, 9):
        js = {"low": range(n), "middle": range(n, 2 * n - 1), "top": [2 * n - 1]}[branch]
        for j in js:
            assert pnj(n, j) == pnj_gegenbauer_form(n, j)
            assert pnj_gegenbauer_identity(n, j)


def test_pnj_degree_and_low_order_values():
    for n in range(1, 6):
        for j in range(2 * n):
            assert pnj(n, j).degree == j
    # P_{n,0} = (2n-2)!/(n-1)! is a constant
    assert pnj(3, 0) == UniPoly.constant(12)
