"""Command-line front end.

    python -m kdvheat hadamard --tau soliton.json --n 3 --x 0.7 --y -0.4
    python -m kdvheat verify --tau soliton.json --suite all --nmax 4

Results go to stdout as JSON (CSV for ``hadamard --format csv``), diagnostics
to stderr.  Exit status: 0 success, 1 a verification check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

import mpmath
import numpy as np

from .errors import ConfigParseError, DenominatorZero, DiagonalEvaluation, KdvHeatError
from .gegenbauer import gegenbauer_rec, pnj
from .hadamard import hadamard_diag, hadamard_offdiag
from .polynomial import format_monomial, format_poly
from .psdo import _deriv_name, lax_rhs
from .sato import w_coeff
from .schur import schur_poly
from .expr import EvalPoint, evaluate
from .tauio import format_rational, load_tau, parse_rational
from .tolerances import DEFAULT_PRECISION, MAX_ORDER
from .verify import SUITES, run_suites

PRECISION_ENV = "KDVHEAT_PRECISION"


@dataclass
class RunConfig:
    subcommand: str
    tau: str | None = None
    n: int | None = None
    x: str | None = None
    y: str | None = None
    diag: bool = False
    grid: str | None = None
    precision: int = DEFAULT_PRECISION
    fmt: str = "json"
    suite: str = "all"
    nmax: int = 4
    points: int = 5
    seed: int = 0
    k: int | None = None
    lam: str | None = None
    j: int | None = None
    depth: int | None = None
    tolerances: dict = field(default_factory=dict)
    timestamp: bool = True
    max_order: int = MAX_ORDER
    given: tuple = ()

    def validate(self):
        if self.precision < 16:
            raise ConfigParseError("precision must be at least 16 digits")
        for name in ("n", "nmax"):
            v = getattr(self, name)
            if v is not None and self.subcommand in ("hadamard", "wcoeff", "verify") and v > self.max_order:
                raise ConfigParseError(f"--{name} {v} exceeds the supported cap {self.max_order}")


def _fmt(v, digits: int) -> str:
    return mpmath.nstr(v, digits)


def parse_grid(spec: str):
    try:
        axes = []
        for part in spec.split(","):
            a, b, count = part.split(":")
            axes.append(np.linspace(float(a), float(b), int(count)))
        gx, gy = axes
    except ValueError as exc:
        raise ConfigParseError(f"grid must look like x0:x1:count,y0:y1:count, got {spec!r}") from exc
    return [float(v) for v in gx], [float(v) for v in gy]


def _require(cfg: RunConfig, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigParseError(f"{cfg.subcommand} needs --" + ", --".join(missing))


def _hadamard_rows(cfg: RunConfig, tau):
    _require(cfg, "n")
    if cfg.grid:
        xs, ys = parse_grid(cfg.grid)
        pairs = [(x, y) for x in xs for y in ys]
    elif cfg.diag:
        _require(cfg, "x")
        pairs = [(cfg.x, cfg.x)]
    else:
        _require(cfg, "x", "y")
        pairs = [(cfg.x, cfg.y)]
    rows = []
    for x, y in pairs:
        if cfg.diag or str(x) == str(y):
            v = hadamard_diag(tau, cfg.n, x, cfg.precision)
        else:
            v = hadamard_offdiag(tau, cfg.n, x, y, cfg.precision)
        rows.append({"n": cfg.n, "x": str(x), "y": str(y), "value": _fmt(v, cfg.precision)})
    return rows


_INPUT_NAMES = {"lam": "lambda", "fmt": "format"}


def run(cfg: RunConfig):
    """Execute one subcommand; returns ``(exit_status, record)``."""
    cfg.validate()
    sub = cfg.subcommand
    keys = cfg.given or tuple(cfg.__dict__)
    skip = ("subcommand", "timestamp", "given")
    inputs = {_INPUT_NAMES.get(k, k): getattr(cfg, k) for k in keys
              if k not in skip and getattr(cfg, k) not in (None, False, {})}
    record: dict = {"subcommand": sub, "inputs": inputs}
    status = 0
    if sub == "hadamard":
        _require(cfg, "tau")
        record["precision"] = cfg.precision
        rows = _hadamard_rows(cfg, load_tau(cfg.tau))
        if cfg.grid is None:
            record.update(rows[0])
        else:
            record["rows"] = rows
    elif sub == "wcoeff":
        _require(cfg, "tau", "n", "x", "y")
        expr = w_coeff(load_tau(cfg.tau), cfg.n)
        v = evaluate(expr, EvalPoint(cfg.x, {}, cfg.precision), cfg.y)
        record.update({"n": cfg.n, "x": cfg.x, "y": cfg.y, "value": _fmt(v, cfg.precision)})
    elif sub == "schur":
        _require(cfg, "k")
        p = schur_poly(cfg.k)
        terms = [{"monomial": format_monomial(m), "coeff": format_rational(c)} for m, c in p.sorted_items()]
        record.update({"k": cfg.k, "terms": terms,
                       "polynomial": format_poly(p)})
    elif sub == "gegenbauer":
        _require(cfg, "n", "lam")
        lam = parse_rational(cfg.lam)
        record.update({"n": cfg.n, "lambda": format_rational(lam),
                       "coefficients": [format_rational(c) for c in gegenbauer_rec(cfg.n, lam).coeffs] or ["0"]})
    elif sub == "pnj":
        _require(cfg, "n", "j")
        record.update({"n": cfg.n, "j": cfg.j,
                       "coefficients": [format_rational(c) for c in pnj(cfg.n, cfg.j).coeffs] or ["0"]})
    elif sub == "lax":
        _require(cfg, "j")
        rhs = lax_rhs(cfg.j, cfg.depth)
        terms = []
        for m, c in sorted(rhs.coeffs.items(), key=lambda mc: (sum(mc[0]), mc[0])):
            name = "*".join(_deriv_name(i) if e == 1 else f"{_deriv_name(i)}^{e}" for i, e in enumerate(m) if e)
            terms.append({"monomial": name or "1", "coeff": format_rational(c)})
        record.update({"j": cfg.j, "polynomial": str(rhs), "terms": terms})
    elif sub == "verify":
        _require(cfg, "tau")
        suites = list(SUITES) if cfg.suite == "all" else [cfg.suite]
        report = run_suites(load_tau(cfg.tau), suites, nmax=cfg.nmax, npoints=cfg.points, seed=cfg.seed,
                            overrides=cfg.tolerances, precision=cfg.precision)
        record["suites"] = report
        record["passed"] = all(s["passed"] for s in report.values())
        status = 0 if record["passed"] else 1
        for name, s in report.items():
            failed = sum(not c["pass"] for c in s["checks"])
            print(f"{name}: {'PASS' if s['passed'] else 'FAIL'} ({len(s['checks']) - failed}/{len(s['checks'])})",
                  file=sys.stderr)
    else:
        raise ConfigParseError(f"unknown subcommand {sub!r}")
    return status, record


def build_parser() -> argparse.ArgumentParser:
    env_prec = os.environ.get(PRECISION_ENV)
    default_prec = int(env_prec) if env_prec else DEFAULT_PRECISION
    parser = argparse.ArgumentParser(prog="kdvheat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, tau=True):
        if tau:
            p.add_argument("--tau", required=True, help="tau family JSON file")
        p.add_argument("--precision", type=int, default=default_prec)
        p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    p = sub.add_parser("hadamard", help="Hadamard coefficient H_n")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--diag", action="store_true")
    p.add_argument("--grid", help="x0:x1:count,y0:y1:count")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p = sub.add_parser("wcoeff", help="kernel coefficient W_n(x, y)")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = sub.add_parser("schur", help="elementary Schur polynomial S_k")
    p.add_argument("k", type=int)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    p = sub.add_parser("gegenbauer", help="Gegenbauer polynomial coefficients (ascending)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    p = sub.add_parser("pnj", help="P_{n,j} coefficients (ascending)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    p = sub.add_parser("lax", help="[(L^(j/2))_+, L] as a differential polynomial")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--depth", type=int)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="tolerance override")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    tols = {}
    for item in d.pop("tol", []) or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigParseError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            tols[name] = float(value)
        except ValueError as exc:
            raise ConfigParseError(f"bad tolerance value {value!r}") from exc
    d["tolerances"] = tols
    given = tuple(k for k in d if k != "tolerances") + (("tolerances",) if tols else ())
    return RunConfig(**d, given=given)


def _emit(record: dict, cfg: RunConfig, out):
    if cfg.subcommand == "hadamard" and cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["n", "x", "y", "value"], lineterminator="\n")
        w.writeheader()
        rows = record.get("rows") or [{k: record[k] for k in ("n", "x", "y", "value")}]
        w.writerows(rows)
        out.write(buf.getvalue())
        return
    out.write(json.dumps(record, indent=2, sort_keys=False) + "\n")


_NEGATIVE_VALUE = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+([eE][-+]?\d+)?|\d+[eE][-+]?\d+)$")


def _glue_negative_values(argv: list) -> list:
    """Let ``--lambda -3/2`` through; argparse would read ``-3/2`` as an option."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = config_from_args(ns)
        start = time.perf_counter()
        status, record = run(cfg)
        if cfg.timestamp:
            record["meta"] = {
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "wall_time_s": round(time.perf_counter() - start, 6),
            }
    except (KdvHeatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(record, cfg, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
