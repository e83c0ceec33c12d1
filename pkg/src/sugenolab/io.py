"""JSON reading and writing for capacities, functions and reports.

Infinity is written as the string ``"inf"``.  Floats go through ``repr``,
which is the shortest round-trip-exact form.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .capacity import Capacity, counting_dyadic, from_additive, members, validate_capacity
from .errors import CapacityError, ParseError
from .integrals import MeasurableFn


def _encode_value(v: float):
    if math.isinf(v):
        return "inf"
    return float(v)


def _decode_value(v, where: str) -> float:
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ParseError(f"{where}: unrecognised value {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number or \"inf\", got {v!r}")
    return float(v)


def to_jsonable(obj):
    """Recursively replace infinities and numpy scalars with JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return _encode_value(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False)


def loads(text: str, source: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[min(exc.lineno, len(lines)) - 1] if lines else ""
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {context}") from exc


def capacity_to_dict(mu: Capacity) -> dict:
    out: dict = {
        "n": mu.n,
        "entries": [
            {"subset": members(m), "value": _encode_value(float(v))} for m, v in enumerate(mu.values)
        ],
    }
    if mu.rule and mu.rule.get("kind") in ("counting-dyadic", "additive"):
        out["rule"] = mu.rule
    return out


def capacity_from_dict(data, source: str = "<capacity>") -> Capacity:
    if not isinstance(data, dict) or "n" not in data:
        raise ParseError(f"{source}: a capacity needs an object with key \"n\"")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"{source}: \"n\" must be an integer")
    rule = data.get("rule")
    if rule is not None and "entries" not in data:
        kind = rule.get("kind")
        if kind == "counting-dyadic":
            mu = counting_dyadic(int(rule["N"]))
        elif kind == "additive":
            mu = from_additive(rule["weights"])
        else:
            raise ParseError(f"{source}: unknown rule kind {kind!r}")
        if mu.n != n:
            raise ParseError(f"{source}: rule describes {mu.n} points, \"n\" says {n}")
        return mu
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise ParseError(f"{source}: explicit tables need an \"entries\" list")
    table: dict[int, float] = {}
    for k, entry in enumerate(entries):
        where = f"{source}: entry {k}"
        try:
            subset = entry["subset"]
            value = entry["value"]
        except (TypeError, KeyError):
            raise ParseError(f"{where}: needs \"subset\" and \"value\"") from None
        mask = 0
        for i in subset:
            if not isinstance(i, int) or not 0 <= i < n:
                raise ParseError(f"{where}: point {i!r} outside 0..{n - 1}")
            mask |= 1 << i
        if mask in table:
            raise ParseError(f"{where}: subset {sorted(subset)} listed twice")
        table[mask] = _decode_value(value, where)
    try:
        return validate_capacity(table, n, rule=rule)
    except CapacityError as exc:
        if "missing" in str(exc):
            raise ParseError(f"{source}: {exc}") from exc
        raise


def function_to_dict(f: MeasurableFn) -> dict:
    return {"n": f.n, "values": f.values.tolist()}


def function_from_dict(data, source: str = "<function>") -> MeasurableFn:
    if not isinstance(data, dict) or "values" not in data:
        raise ParseError(f"{source}: a function needs an object with key \"values\"")
    vals = [_decode_value(v, f"{source}: values") for v in data["values"]]
    if "n" in data and data["n"] != len(vals):
        raise ParseError(f"{source}: \"n\" is {data['n']} but {len(vals)} values given")
    if any(math.isinf(v) for v in vals):
        raise ParseError(f"{source}: function values must be finite")
    return MeasurableFn(np.array(vals))


def _read(path: str | Path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return loads(text, str(path))


def read_capacity(path: str | Path) -> Capacity:
    return capacity_from_dict(_read(path), str(path))


def read_function(path: str | Path) -> MeasurableFn:
    return function_from_dict(_read(path), str(path))


def write_capacity(mu: Capacity, path: str | Path) -> None:
    Path(path).write_text(dumps(capacity_to_dict(mu)) + "\n")


def write_function(f: MeasurableFn, path: str | Path) -> None:
    Path(path).write_text(dumps(function_to_dict(f)) + "\n")
