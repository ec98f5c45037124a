"""JSON encoding of curves, points, divisors and results.

Complex numbers are ``[re, im]`` pairs.  Floats are written with Python's
shortest round-trip repr, so decoding gives back the same doubles.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .curve import (
    INFINITY,
    CurvePoint,
    Divisor,
    HyperellipticCurve,
    Linear,
    RationalFunctionSpec,
    YCoord,
    branch_point,
    finite_point,
    new_curve,
)
from .errors import InputError


def cx(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def cx_array(a) -> list:
    a = np.asarray(a)
    if a.ndim == 0:
        return cx(a)
    return [cx_array(v) for v in a]


def parse_cx(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"expected a number or [re, im] pair, got {v!r}")


def parse_vector(v) -> np.ndarray:
    if not isinstance(v, (list, tuple)):
        raise InputError("expected a list of [re, im] pairs")
    return np.array([parse_cx(t) for t in v], dtype=complex)


def curve_to_json(curve: HyperellipticCurve) -> dict:
    return {"coeffs": [cx(c) for c in curve.coeffs], "genus": curve.genus,
            "branch_points": [cx(e) for e in curve.roots]}


def curve_from_json(obj: dict, threshold: float | None = None) -> HyperellipticCurve:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise InputError('curve JSON needs a "coeffs" list')
    coeffs = [parse_cx(c) for c in obj["coeffs"]]
    return new_curve(coeffs) if threshold is None else new_curve(coeffs, threshold)


def point_to_json(P: CurvePoint) -> dict:
    if P.is_infinity:
        return {"kind": "infinity"}
    if P.is_branch:
        return {"kind": "branch", "x": cx(P.x)}
    return {"x": cx(P.x), "sheet": P.sheet}


def point_from_json(obj: dict) -> CurvePoint:
    if not isinstance(obj, dict):
        raise InputError(f"bad point {obj!r}")
    kind = obj.get("kind", "finite")
    if kind == "infinity":
        return INFINITY
    if "x" not in obj:
        raise InputError('point JSON needs "x"')
    x = parse_cx(obj["x"])
    if kind == "branch":
        return branch_point(x)
    if kind != "finite":
        raise InputError(f"unknown point kind {kind!r}")
    sheet = obj.get("sheet", 1)
    if sheet not in (1, -1):
        raise InputError("sheet must be 1 or -1")
    return finite_point(x, sheet)


def divisor_to_json(D: Divisor) -> dict:
    return {"entries": [{"point": point_to_json(P), "mult": m} for P, m in D]}


def divisor_from_json(obj: dict, curve: HyperellipticCurve | None = None) -> Divisor:
    if not isinstance(obj, dict) or not isinstance(obj.get("entries"), list):
        raise InputError('divisor JSON needs an "entries" list')
    out = []
    for e in obj["entries"]:
        if not isinstance(e, dict) or not isinstance(e.get("mult"), int):
            raise InputError(f"bad divisor entry {e!r}")
        P = point_from_json(e["point"])
        if curve is not None and not P.is_infinity:
            P = curve.point(P.x, P.sheet) if P.kind == "finite" else curve.canonical(P)
        out.append((P, e["mult"]))
    return Divisor(out)


def function_from_json(obj: dict) -> RationalFunctionSpec:
    """``{"factors": [{"linear": [re, im], "power": m} | {"y": m}]}``."""
    facs = []
    for f in obj.get("factors", []):
        if "linear" in f:
            facs.append((Linear(parse_cx(f["linear"])), int(f.get("power", 1))))
        elif "y" in f:
            facs.append((YCoord(), int(f["y"])))
        else:
            raise InputError(f"bad factor {f!r}")
    return RationalFunctionSpec(tuple(facs))


def function_to_json(h: RationalFunctionSpec) -> dict:
    out = []
    for fac, m in h.factors:
        out.append({"linear": cx(fac.c), "power": m} if isinstance(fac, Linear) else {"y": m})
    return {"factors": out}


def jacobian_point_to_json(u) -> dict:
    return {"value": cx_array(u.value), "reduced": cx_array(u.reduced),
            "lattice_distance": u.distance_to_zero}


def _default(o: Any):
    if isinstance(o, (complex, np.complexfloating)):
        return cx(o)
    if isinstance(o, np.ndarray):
        return cx_array(o) if np.iscomplexobj(o) else o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, default=_default, sort_keys=True, indent=2, allow_nan=True) + "\n"
