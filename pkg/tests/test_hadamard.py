from fractions import Fraction

import mpmath
import pytest

from kdvheat import DiagonalEvaluation, EvalPoint, evaluate, free_tau, make_rational_tau, make_soliton, potential
from kdvheat.hadamard import (
    hadamard_closed_forms,
    hadamard_coefficient,
    hadamard_diag,
    hadamard_expr,
    hadamard_offdiag,
    hadamard_weight,
    recursion_residual,
    recursion_residual_expr,
    richardson_diagonal,
    smoothness_check,
)

from conftest import FAMILIES, random_pairs, random_points


def rel(a, b):
    return abs(a - b) / max(1, abs(b))


def test_weights():
    assert hadamard_weight(1, 0) == -2
    assert hadamard_weight(2, 0) == 4 and hadamard_weight(2, 1) == 4
    assert hadamard_weight(3, 2) == Fraction(-2 * 1 * 2 * 3 * 4, 2)


def test_examples():
    for n in range(1, 13):
        assert hadamard_expr(free_tau(), n).is_zero()
    assert hadamard_offdiag(make_soliton([1]), 0, "0.3", "-0.2") == 1
    v = hadamard_offdiag(make_rational_tau(1), 1, 1, 2)
    assert abs(v + 1) < 1e-28
    v = hadamard_diag(make_rational_tau(1), 1, 2)
    assert abs(v + mpmath.mpf(1) / 2) < 1e-28


def test_coefficient_object_is_callable():
    h = hadamard_coefficient(make_soliton([1]), 2)
    assert h.order == 2
    assert h("0.7", "-0.4") == hadamard_offdiag(make_soliton([1]), 2, "0.7", "-0.4")


def test_diagonal_raises():
    with pytest.raises(DiagonalEvaluation):
        hadamard_offdiag(make_soliton([1]), 2, "0.5", "0.5")


@pytest.mark.parametrize("name", ["soliton1", "soliton2", "rational1", "rational2"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_closed_forms(name, n):
    tau = FAMILIES[name]()
    for x, y in random_pairs(name, 5, seed=n):
        a = hadamard_offdiag(tau, n, x, y, 40)
        b = hadamard_closed_forms(tau, n, x, y, 40)
        assert rel(a, b) < 1e-10


def test_h1_against_closed_form_twenty_points():
    tau = make_soliton([1, 2], [0, "1/3"])
    for x, y in random_pairs("soliton2", 20, seed=42):
        assert rel(hadamard_offdiag(tau, 1, x, y, 40), hadamard_closed_forms(tau, 1, x, y, 40)) < 1e-10


def test_finite_families():
    lv1, lv2 = make_rational_tau(1), make_rational_tau(2)
    for x, y in [(1.5, 0.7), (2.2, 0.9)]:
        for n in (2, 3):
            assert abs(hadamard_offdiag(lv1, n, x, y)) < 1e-20
        for n in (3, 4, 5):
            assert abs(hadamard_offdiag(lv2, n, x, y)) < 1e-18


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_symmetry(name):
    tau = FAMILIES[name]()
    for a, b in random_pairs(name, 20, seed=9):
        for n in range(1, 7):
            h_ab = hadamard_offdiag(tau, n, a, b, 30)
            h_ba = hadamard_offdiag(tau, n, b, a, 30)
            assert abs(h_ab - h_ba) <= 1e-10 * max(1, abs(h_ab))


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_recursion(name):
    tau = FAMILIES[name]()
    for n in (1, 2):
        assert recursion_residual_expr(tau, n).is_zero() or \
            max(recursion_residual(tau, n, x, y) for x, y in random_pairs(name, 3)) < 1e-20
    for x, y in random_pairs(name, 3, seed=4):
        for n in (3, 4):
            scale = max(1, abs(hadamard_offdiag(tau, n, x, y)))
            assert recursion_residual(tau, n, x, y) < 1e-8 * scale


def test_recursion_fails_off_hierarchy():
    from test_sato import broken_two_soliton

    assert recursion_residual(broken_two_soliton(), 3, "0.4", "-0.5") > 1e-4


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_diagonal_vs_richardson(name):
    tau = FAMILIES[name]()
    for x in random_points(name, 3, seed=1):
        for n in (1, 2, 3):
            d = hadamard_diag(tau, n, x)
            r = richardson_diagonal(tau, n, x)
            assert rel(r, d) < 1e-6


def test_diagonal_convergence_order():
    tau = make_soliton([1, 2], [0, "1/3"])
    x = mpmath.mpf("0.2")
    d = hadamard_diag(tau, 3, x, 40)
    errs = [abs(hadamard_offdiag(tau, 3, x, x + mpmath.mpf(e), 40) - d) for e in ("1e-2", "1e-3", "1e-4")]
    for a, b in zip(errs, errs[1:]):
        assert mpmath.log10(a / b) >= 0.9


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_h1_on_diagonal_is_potential(name):
    tau = FAMILIES[name]()
    for x in random_points(name, 5, seed=8):
        u = evaluate(potential(tau), EvalPoint(x, {}, 40))
        assert rel(hadamard_diag(tau, 1, x, 40), u) < 1e-10


def test_precision_escalation_near_diagonal():
    tau = make_soliton([1])
    x = mpmath.mpf("0.3")
    y = x + mpmath.mpf("1e-6")
    ref = hadamard_offdiag(tau, 4, x, y, 90)
    got = hadamard_offdiag(tau, 4, x, y, 20)
    assert rel(got, ref) < 1e-15


@pytest.mark.parametrize("name,n,js,xs", [
    ("soliton1", 2, range(3), random_points("soliton1", 5)),
    ("rational1", 3, range(5), [1]),
    ("rational2", 4, range(7), [1.3]),
    ("soliton2", 4, range(7), random_points("soliton2", 2)),
])
def test_smoothness(name, n, js, xs):
    tau = FAMILIES[name]()
    for x in xs:
        for j in js:
            assert smoothness_check(tau, n, j, x) < 1e-9


def test_smoothness_free_exact():
    from kdvheat.hadamard import smoothness_expr

    for n in range(1, 5):
        for j in range(2 * n - 1):
            assert smoothness_expr(free_tau(), n, j).poly.coeffs == {}


def test_time_dependence():
    """H_n follows the tau-function along the KdV time s3."""
    tau = make_soliton([1])
    shifted = make_soliton([1], ["1/5"])
    # a 1-soliton at s3 = t equals one with phase constant shifted by t (since k^3 = k)
    a = hadamard_offdiag(tau, 2, "0.4", "-0.3", 30, {3: "0.1"})
    b = hadamard_offdiag(shifted, 2, "0.4", "-0.3", 30)
    assert abs(a - b) < 1e-25
