"""Verification suites: each returns a list of check records with pass/fail."""
from __future__ import annotations

import numpy as np

from .expr import EvalPoint, evaluate, potential
from .hadamard import (
    hadamard_diag,
    hadamard_offdiag,
    recursion_residual,
    richardson_diagonal,
    smoothness_check,
)
from .oracle import higher_flow_check, kdv_flow_check, recursion_coeff, u_squared_integral_check
from .psdo import lax_vs_wkernel
from .sato import bilinear_check, wave_equation_residual
from .tau import TauFunction
from .tolerances import tolerance

SUITES = ("recursion", "kdv", "flows", "bilinear", "smoothness", "symmetry", "diagonal")


def default_range(tau: TauFunction):
    polynomial = all(ph.is_zero for ph, _ in tau.items())
    return (0.5, 2.5) if polynomial else (-1.5, 1.5)


def sample_points(count: int, xrange, seed: int = 0):
    rng = np.random.default_rng(seed)
    return [float(v) for v in rng.uniform(xrange[0], xrange[1], count)]


def sample_pairs(count: int, xrange, seed: int = 0, dmin: float = 0.1, dmax: float = 2.0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, b = rng.uniform(xrange[0], xrange[1], 2)
        if dmin <= abs(a - b) <= dmax:
            out.append((float(a), float(b)))
    return out


def _rel(a, b) -> float:
    return float(abs(a - b) / max(1, abs(a)))


def _record(check: str, params: dict, residual, tol: float) -> dict:
    r = float(residual)
    return {"check": check, "params": params, "residual": r, "tolerance": tol, "pass": bool(r <= tol)}


def suite_recursion(tau, nmax, pairs, overrides=None, precision=30):
    out = []
    for n in range(1, nmax + 1):
        for x, y in pairs:
            h = hadamard_offdiag(tau, n, x, y, precision)
            r = recursion_coeff(tau, n, x, y)
            out.append(_record("oracle_equivalence", {"n": n, "x": x, "y": y}, _rel(h, r), tolerance("oracle", overrides)))
            res = recursion_residual(tau, n, x, y, precision) / max(1, abs(h))
            out.append(_record("heat_recursion", {"n": n, "x": x, "y": y}, res, tolerance("recursion", overrides)))
    return out


def suite_kdv(tau, nmax, pairs, points, overrides=None, precision=30):
    out = [_record("kdv_flow", {"x": x}, kdv_flow_check(tau, x, precision=precision), tolerance("kdv_flow", overrides))
           for x in points]
    out += [_record("u_squared_integral", {"x": x, "y": y}, u_squared_integral_check(tau, x, y, precision=precision),
                    tolerance("u_squared_integral", overrides)) for x, y in pairs]
    return out


def suite_flows(tau, nmax, points, overrides=None, precision=30):
    out = []
    for n in range(1, nmax + 1):
        for x in points:
            out.append(_record("higher_flow", {"n": n, "x": x}, higher_flow_check(tau, n, x, precision=precision),
                               tolerance("higher_flow", overrides)))
            out.append(_record("lax_wkernel", {"n": n, "x": x}, lax_vs_wkernel(tau, n, x, precision=precision),
                               tolerance("lax_wkernel", overrides)))
    return out


def suite_bilinear(tau, points, overrides=None, precision=30, K=16, kmax=8):
    out = []
    for x in points:
        p = EvalPoint(x, {}, precision)
        for n in range(3):
            for l in range(3):
                out.append(_record("bilinear", {"n": n, "l": l, "K": K, "x": x}, bilinear_check(tau, n, l, K, p),
                                   tolerance("bilinear", overrides)))
        for side in ("wave", "adjoint"):
            for k in range(kmax + 1):
                out.append(_record("wave_equation", {"k": k, "side": side, "x": x},
                                   wave_equation_residual(tau, k, p, side), tolerance("wave_equation", overrides)))
    return out


def suite_smoothness(tau, nmax, points, overrides=None, precision=30):
    return [
        _record("smoothness", {"n": n, "j": j, "x": x}, smoothness_check(tau, n, j, x, precision),
                tolerance("smoothness", overrides))
        for n in range(1, nmax + 1) for j in range(2 * n - 1) for x in points
    ]


def suite_symmetry(tau, nmax, pairs, overrides=None, precision=30):
    out = []
    for n in range(1, nmax + 1):
        for a, b in pairs:
            h1 = hadamard_offdiag(tau, n, a, b, precision)
            h2 = hadamard_offdiag(tau, n, b, a, precision)
            out.append(_record("symmetry", {"n": n, "a": a, "b": b}, _rel(h1, h2), tolerance("symmetry", overrides)))
    return out


def suite_diagonal(tau, nmax, points, overrides=None, precision=30):
    out = []
    u = potential(tau)
    for x in points:
        h1 = hadamard_diag(tau, 1, x, precision)
        uval = evaluate(u, EvalPoint(x, {}, precision))
        out.append(_record("h1_equals_u", {"x": x}, abs(h1 - uval), tolerance("h1_diagonal", overrides)))
        for n in range(1, nmax + 1):
            d = hadamard_diag(tau, n, x, precision)
            r = richardson_diagonal(tau, n, x, precision=precision)
            out.append(_record("diagonal_limit", {"n": n, "x": x}, _rel(d, r), tolerance("diagonal_richardson", overrides)))
    return out


def run_suites(tau, suites, nmax=4, npoints=5, seed=0, xrange=None, overrides=None, precision=30) -> dict:
    xrange = xrange or default_range(tau)
    points = sample_points(npoints, xrange, seed)
    pairs = sample_pairs(npoints, xrange, seed + 1)
    report = {}
    for name in suites:
        if name == "recursion":
            checks = suite_recursion(tau, nmax, pairs, overrides, precision)
        elif name == "kdv":
            checks = suite_kdv(tau, nmax, pairs, points, overrides, precision)
        elif name == "flows":
            checks = suite_flows(tau, nmax, points, overrides, precision)
        elif name == "bilinear":
            checks = suite_bilinear(tau, points, overrides, precision)
        elif name == "smoothness":
            checks = suite_smoothness(tau, nmax, points, overrides, precision)
        elif name == "symmetry":
            checks = suite_symmetry(tau, nmax, pairs, overrides, precision)
        elif name == "diagonal":
            checks = suite_diagonal(tau, nmax, points, overrides, precision)
        else:
            raise ValueError(f"unknown suite {name!r}")
        report[name] = {"passed": all(c["pass"] for c in checks), "checks": checks}
    return report
