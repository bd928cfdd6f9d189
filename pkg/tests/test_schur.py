from fractions import Fraction
from math import factorial, log

import mpmath
import numpy as np
import pytest

from kdvheat import EvalPoint, ExpPoly, LinearPhase, Poly, TauFunction, evaluate, make_rational_tau, make_soliton
from kdvheat.expr import Site, make_context
from kdvheat.schur import odd_partitions, schur_apply, schur_operator, schur_poly, schur_ratio


def test_schur_poly_examples():
    assert schur_poly(0) == Poly.constant(1)
    assert schur_poly(1) == Poly.variable(0)
    assert schur_poly(2) == Poly({(2,): Fraction(1, 2)})
    assert schur_poly(3) == Poly({(3,): Fraction(1, 6), (0, 1): 1})


def test_partition_enumeration_is_ordered_and_complete():
    # number of partitions into odd parts = number into distinct parts
    distinct = [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10, 12, 15]
    for k, count in enumerate(distinct):
        parts = odd_partitions(k)
        assert len(parts) == count
        assert list(parts) == sorted(parts, key=lambda mi: mi + (0,) * 10)


def _series_exp(f, K):
    """exp of a power series f (f[0] == 0) truncated at degree K, exact."""
    out = [Fraction(0)] * (K + 1)
    power = [Fraction(1)] + [Fraction(0)] * K
    for m in range(K + 1):
        for i, c in enumerate(power):
            out[i] += c / factorial(m)
        new = [Fraction(0)] * (K + 1)
        for i, a in enumerate(power):
            if a:
                for j, b in enumerate(f[: K + 1 - i]):
                    new[i + j] += a * b
        power = new
    return out


class _Exact:
    @staticmethod
    def mpf(v):
        return Fraction(v)


@pytest.mark.parametrize("K", [8, 11])
def test_generating_function_exactly(K):
    rng = np.random.default_rng(K)
    for _ in range(4):
        s = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 7))) for _ in range((K + 1) // 2)]
        f = [Fraction(0)] * (K + 1)
        for slot, v in enumerate(s):
            f[2 * slot + 1] = v
        expected = _series_exp(f, K)
        got = [schur_poly(k).evaluate(s, _Exact) for k in range(K + 1)]
        assert got == expected


def test_operator_form():
    op = schur_operator(3, "+")
    assert dict(op.terms) == {(3,): Fraction(1, 6), (0, 1): Fraction(1, 3)}
    minus = dict(schur_operator(3, "-").terms)
    assert minus == {(3,): Fraction(-1, 6), (0, 1): Fraction(-1, 3)}
    assert str(op) == "(1/3)*d3 + (1/6)*d1^3"


def test_apply_examples():
    tau = make_soliton([1, 2])
    assert schur_apply(tau, 0) == tau
    assert schur_apply(make_rational_tau(1), 1, "-") == ExpPoly.constant(-1)
    e = TauFunction({LinearPhase.from_coeffs({1: 1, 3: 1}): Poly.constant(1)})
    half = TauFunction({LinearPhase.from_coeffs({1: 1, 3: 1}): Poly.constant(Fraction(1, 2))})
    assert schur_apply(e, 3, "+") == half


def test_apply_k3_matches_taylor_shift():
    """Coefficient of z^-3 in exp(x + s3) shifted by +[1/z], by Richardson in z."""
    with mpmath.workdps(40):
        def g(z):
            z = mpmath.mpf(z)
            shifted = mpmath.e ** (1 / z + 1 / (3 * z**3))
            return (shifted - 1 - 1 / z - 1 / (2 * z**2)) * z**3

        a, b = g(10**4), g(10**5)
        extrap = (10 * b - a) / 9
        assert abs(extrap - mpmath.mpf(1) / 2) < 1e-8


def test_linearity():
    t1 = make_soliton([1, 2], [0, "1/3"])
    t2 = make_rational_tau(2)
    combo = t1 * Fraction(3, 2) + t2 * Fraction(-2)
    for k in range(6):
        for sign in ("+", "-"):
            assert schur_apply(combo, k, sign) == schur_apply(t1, k, sign) * Fraction(3, 2) + schur_apply(t2, k, sign) * Fraction(-2)


def test_ratio_form_consistent_with_apply():
    tau = make_soliton([1, 2], [0, "1/3"])
    p = EvalPoint("0.4", {3: "-0.2"})
    for k in range(5):
        direct = evaluate(schur_apply(tau, k, "-"), p) / evaluate(tau, p)
        ratio = schur_ratio(k, "-").evaluate_at(Site(tau, p.x, p.times, make_context(30)))
        assert abs(direct - ratio) < 1e-25


@pytest.mark.parametrize("sign", ["-", "+"])
def test_shift_identity_order(sign):
    tau = make_soliton([1, 2], [0, "1/3"])
    K = 6
    x0 = mpmath.mpf("0.3")
    ctx = make_context(50)
    coeffs = [schur_apply(tau, k, sign) for k in range(K + 1)]
    vals = [c.evaluate_at(Site(tau, x0, {}, ctx)) for c in coeffs]
    s = -1 if sign == "-" else 1
    errs = []
    for z in (10, 20, 40):
        z = ctx.mpf(z)
        times = {odd: s * ctx.mpf(1) / (odd * z**odd) for odd in range(3, 81, 2)}
        exact = tau.evaluate_at(Site(tau, x0 + s / z, times, ctx))
        approx = sum(v * z ** (-k) for k, v in enumerate(vals))
        errs.append(abs(exact - approx))
    orders = [float(ctx.log(errs[i] / errs[i + 1]) / log(2)) for i in range(2)]
    assert min(orders) >= K
