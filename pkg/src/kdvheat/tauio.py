"""JSON description of tau families.

Three shapes are accepted::

    {"type": "soliton", "wavenumbers": ["1", "2"], "phase_constants": ["0", "1/3"]}
    {"type": "rational", "level": 2}
    {"type": "exppoly", "time_rule": "explicit",
     "terms": [{"prefactor": {"1": "1"}, "phase": {"x": "2", "s3": "8", "const": "0"}}]}

Rationals are ``"p/q"`` strings (integers are also accepted).  An exppoly
phase may add ``"modes": [{"k": "1", "weight": "2"}]`` for a dispersion part,
which requires ``"time_rule": "dispersion"``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ConfigParseError, UnsupportedTauType
from .polynomial import Poly, format_monomial, odd_of, parse_monomial, slot_of
from .tau import LinearPhase, TauFunction, make_rational_tau, make_soliton


def parse_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise ConfigParseError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(repr(v))
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigParseError(f"not a rational: {v!r}") from exc
    raise ConfigParseError(f"not a rational: {v!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _phase_from_dict(d: dict) -> LinearPhase:
    explicit: list = []
    const = Fraction(0)
    modes = []
    for key, val in d.items():
        if key == "const":
            const = parse_rational(val)
        elif key == "modes":
            try:
                modes = [(parse_rational(m["k"]), parse_rational(m["weight"])) for m in val]
            except (KeyError, TypeError) as exc:
                raise ConfigParseError(f"bad modes entry: {val!r}") from exc
        else:
            if key == "x":
                slot = 0
            elif key.startswith("s") and key[1:].isdigit():
                try:
                    slot = slot_of(int(key[1:]))
                except ValueError as exc:
                    raise ConfigParseError(str(exc)) from exc
            else:
                raise ConfigParseError(f"unknown phase key {key!r}")
            if len(explicit) <= slot:
                explicit.extend([Fraction(0)] * (slot + 1 - len(explicit)))
            explicit[slot] += parse_rational(val)
    return LinearPhase(tuple(explicit), tuple(modes), const)


def tau_from_dict(d: dict) -> TauFunction:
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigParseError("tau description must be an object with a 'type'")
    kind = d["type"]
    try:
        if kind == "soliton":
            ks = [parse_rational(k) for k in d.get("wavenumbers", [])]
            cs = [parse_rational(c) for c in d.get("phase_constants", [0] * len(ks))]
            return make_soliton(ks, cs)
        if kind == "rational":
            return make_rational_tau(int(d["level"]))
        if kind == "exppoly":
            terms = {}
            for t in d["terms"]:
                pre = Poly({parse_monomial(m): parse_rational(c) for m, c in t.get("prefactor", {"1": 1}).items()})
                ph = _phase_from_dict(t.get("phase", {}))
                terms[ph] = terms[ph] + pre if ph in terms else pre
            return TauFunction(terms, d.get("time_rule", "explicit"))
    except ConfigParseError:
        raise
    except (KeyError, TypeError) as exc:
        raise ConfigParseError(f"malformed {kind} tau description: {exc}") from exc
    raise UnsupportedTauType(f"unsupported tau type {kind!r}")


def tau_to_dict(tau: TauFunction) -> dict:
    """Canonical exppoly form (deterministic ordering)."""
    terms = []
    for phase, pre in sorted(tau.items(), key=lambda kv: _phase_key(kv[0])):
        ph: dict = {}
        for slot, c in enumerate(phase.explicit):
            if c:
                ph["x" if slot == 0 else f"s{odd_of(slot)}"] = format_rational(c)
        if phase.modes:
            ph["modes"] = [{"k": format_rational(k), "weight": format_rational(w)} for k, w in phase.modes]
        if phase.constant:
            ph["const"] = format_rational(phase.constant)
        terms.append({
            "prefactor": {format_monomial(m): format_rational(c) for m, c in pre.sorted_items()},
            "phase": ph,
        })
    return {"type": "exppoly", "time_rule": tau.time_rule, "terms": terms}


def _phase_key(ph: LinearPhase):
    return (ph.explicit, ph.modes, ph.constant)


def load_tau(path) -> TauFunction:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigParseError(f"cannot read tau file {path}: {exc}") from exc
    return tau_from_dict(data)
