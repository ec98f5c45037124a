"""Command-line interface: ``abeljacobi {periods,verify,abel,invert}``.

Exit codes: 0 pass, 1 input error, 2 verification or convergence failure,
3 internal numerical error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import abel as aj
from .curve import HyperellipticCurve, Linear, RationalFunctionSpec, YCoord, divisor_of_function, new_curve
from .elliptic import elliptic_periods_agm, lattice_equivalent
from .errors import (
    AbelJacobiError,
    InputError,
    LeftChart,
    NoConvergence,
    NumericalError,
    PoleOnPath,
    VerificationFailure,
)
from .lattice import lattice_distance, period_lattice
from .paths import DEFAULT_ORDER
from .periods import period_matrices, relations_report, riemann_matrix
from .serialize import (
    curve_from_json,
    curve_to_json,
    cx_array,
    divisor_from_json,
    divisor_to_json,
    dumps,
    function_from_json,
    function_to_json,
    jacobian_point_to_json,
    parse_vector,
    point_from_json,
    point_to_json,
)

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_TOLS = {
    "membership": 1e-7,
    "newton": 1e-8,
    "dlog": 1e-8,
    "degeneracy": 1e-8,
    "injectivity": 1e-4,
    "agm": 1e-9,
}


@dataclass
class RunConfig:
    order: int = DEFAULT_ORDER
    tol: dict = field(default_factory=lambda: dict(DEFAULT_TOLS))
    seed: int = 0
    out: str | None = None
    samples: int = 10

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 8:
            raise InputError("quadrature order must be an integer >= 8")
        for k, v in self.tol.items():
            if k not in DEFAULT_TOLS:
                raise InputError(f"unknown tolerance {k!r}; known: {', '.join(sorted(DEFAULT_TOLS))}")
            if not isinstance(v, (int, float)) or not v > 0:
                raise InputError(f"tolerance {k} must be positive")
        if not isinstance(self.seed, int):
            raise InputError("seed must be an integer")


# ---------------------------------------------------------------- inline parsing

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|(.))")


class _Parser:
    """Recursive-descent parser for ``2x^3 - (1+i)x + 0.5i`` style polynomials."""

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, object, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.toks.append(("num", float(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("sym", m.group(2), m.start(2)))
        self.k = 0

    def error(self, msg: str):
        pos = self.toks[self.k][2] if self.k < len(self.toks) else len(self.text)
        raise InputError(f"{msg} at position {pos} in {self.text!r}")

    def peek(self):
        return self.toks[self.k][1] if self.k < len(self.toks) else None

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok[1]

    def poly(self, allow_x: bool = True) -> dict[int, complex]:
        out: dict[int, complex] = {}
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        while True:
            c, p = self.term(allow_x)
            out[p] = out.get(p, 0) + sign * c
            if self.peek() in ("+", "-"):
                sign = -1 if self.take() == "-" else 1
                continue
            return out

    def coefficient(self) -> complex | None:
        tok = self.peek()
        if isinstance(tok, float):
            v = complex(self.take())
            if self.peek() == "i":
                self.take()
                v *= 1j
            return v
        if tok == "i":
            self.take()
            return 1j
        if tok == "(":
            self.take()
            inner = self.poly(allow_x=False)
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return inner.get(0, 0j)
        return None

    def term(self, allow_x: bool) -> tuple[complex, int]:
        c = self.coefficient()
        if self.peek() == "*":
            if c is None:
                self.error("unexpected '*'")
            self.take()
        if self.peek() == "x":
            if not allow_x:
                self.error("'x' not allowed in a coefficient")
            self.take()
            p = 1
            if self.peek() == "^":
                self.take()
                tok = self.peek()
                if not isinstance(tok, float) or tok != int(tok):
                    self.error("expected an integer exponent")
                p = int(self.take())
            return (1 if c is None else c), p
        if c is None:
            self.error("expected a coefficient or 'x'")
        return c, 0


def parse_polynomial(text: str) -> list[complex]:
    """Ascending coefficients of an inline polynomial such as ``"x^3 - x"``."""
    if not text.strip():
        raise InputError("empty polynomial")
    p = _Parser(text)
    terms = p.poly()
    if p.k != len(p.toks):
        p.error("unexpected character")
    deg = max(terms)
    return [complex(terms.get(k, 0)) for k in range(deg + 1)]


def parse_function(text: str) -> RationalFunctionSpec:
    """Inline function: factors ``(x - c)`` and ``y`` with ``^m``, joined by ``*`` or ``/``."""
    s = text.strip()
    if s.startswith("{"):
        return function_from_json(json.loads(s))
    pos, facs, sign = 0, [], 1
    pat = re.compile(r"\s*(?:\(([^()]*(?:\([^()]*\)[^()]*)*)\)|(y)|([^()y*/^\s]+))\s*(?:\^\s*(-?\d+))?\s*")
    while pos < len(s):
        m = pat.match(s, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse function at position {pos} in {text!r}")
        power = sign * int(m.group(4) or 1)
        if m.group(2):
            facs.append((YCoord(), power))
        else:
            body = m.group(1) if m.group(1) is not None else m.group(3)
            co = parse_polynomial(body)
            if len(co) != 2 or co[1] == 0:
                raise InputError(f"factor {body!r} is not linear in x")
            facs.append((Linear(-co[0] / co[1]), power))
        pos = m.end()
        if pos < len(s):
            if s[pos] not in "*/":
                raise InputError(f"expected '*' or '/' at position {pos} in {text!r}")
            sign = -1 if s[pos] == "/" else 1
            pos += 1
    return RationalFunctionSpec(tuple(facs))


def _load_json_arg(arg: str):
    """A JSON value given inline or as a path to a file."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            arg = fh.read()
    try:
        return json.loads(arg)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def load_curve(source: str, cfg: RunConfig) -> HyperellipticCurve:
    text = source
    if os.path.isfile(source):
        with open(source) as fh:
            text = fh.read()
    thr = cfg.tol["degeneracy"]
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid curve JSON: {exc}") from None
        return curve_from_json(obj, thr)
    return new_curve(parse_polynomial(text), thr)


def load_config(args) -> RunConfig:
    base: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid config JSON: {exc}") from None
        if not isinstance(base, dict):
            raise InputError("config must be a JSON object")
    tol = dict(DEFAULT_TOLS)
    tol.update(base.get("tol", {}))
    for item in args.tol or []:
        name, eq, val = item.partition("=")
        if not eq:
            raise InputError(f"--tol expects name=value, got {item!r}")
        try:
            tol[name.strip()] = float(val)
        except ValueError:
            raise InputError(f"bad tolerance value {val!r}") from None
    return RunConfig(
        order=args.order if args.order is not None else base.get("order", DEFAULT_ORDER),
        tol=tol,
        seed=args.seed if args.seed is not None else base.get("seed", 0),
        out=args.out or base.get("out"),
        samples=base.get("samples", 10),
    )


# ---------------------------------------------------------------- commands

def _pipeline(curve, cfg):
    P = period_matrices(curve, order=cfg.order)
    return P, period_lattice(P)


def cmd_periods(curve: HyperellipticCurve, cfg: RunConfig, args=None) -> tuple[dict, int]:
    P, L = _pipeline(curve, cfg)
    report = relations_report(P)
    out = {
        "curve": curve_to_json(curve),
        "A": cx_array(P.A),
        "B": cx_array(P.B),
        "Omega": cx_array(riemann_matrix(P.A, P.B).Omega),
        "cycles": {"intersection": P.basis.intersection.tolist(),
                   "transform": P.basis.transform.tolist()},
        "report": report,
    }
    if curve.genus == 1:
        E = elliptic_periods_agm(curve)
        ok = lattice_equivalent(L, E.lattice, cfg.tol["agm"] * L.shortest_generator)
        report["agm_equivalent"] = ok
        report["pass"] = bool(report["pass"] and ok)
    return out, EXIT_OK if report["pass"] else EXIT_FAIL


def _family(curve, rng, n):
    return [aj.random_principal_function(curve, rng) for _ in range(n)]


def cmd_verify(curve: HyperellipticCurve, cfg: RunConfig, args=None) -> tuple[dict, int]:
    P, L = _pipeline(curve, cfg)
    rng = np.random.default_rng(cfg.seed)
    relations = relations_report(P)
    tol_m = cfg.tol["membership"]

    abel_rows = []
    for h in _family(curve, rng, cfg.samples):
        r = aj.check_principal(curve, P, L, h, tol_m)
        abel_rows.append({"function": function_to_json(h), **r})

    shift_rows = []
    for _ in range(3):
        O1, O2 = aj.sample_finite_point(curve, rng), aj.sample_finite_point(curve, rng)
        D = aj.fiber_divisor(curve, rng)
        r = aj.base_point_shift(curve, P, L, O1, O2, D)
        shift_rows.append({"O": point_to_json(O1), "O_prime": point_to_json(O2),
                           "divisor": divisor_to_json(D),
                           "difference_distance": r["difference_distance"],
                           "pass": bool(r["difference_distance"] < tol_m)})

    dlog_rows = []
    while len(dlog_rows) < cfg.samples:
        h = aj.random_principal_function(curve, rng)
        try:
            d = aj.dlog_periods(curve, P.basis, h)
        except PoleOnPath:
            continue
        dlog_rows.append({"function": function_to_json(h), "periods": d.integers.tolist(),
                          "defect": d.defect, "pass": bool(d.defect < cfg.tol["dlog"])})

    sub = {
        "riemann_relations": relations,
        "abel_forward": {"checks": abel_rows, "pass": all(r["pass"] for r in abel_rows)},
        "base_point_independence": {"checks": shift_rows, "pass": all(r["pass"] for r in shift_rows)},
        "dlog_integrality": {"checks": dlog_rows, "pass": all(r["pass"] for r in dlog_rows)},
    }
    if curve.genus == 1:
        E = elliptic_periods_agm(curve)
        sub["agm_oracle"] = {"tau": E.tau, "pass": lattice_equivalent(
            L, E.lattice, cfg.tol["agm"] * L.shortest_generator)}
    ok = all(v["pass"] for v in sub.values())
    out = {"curve": curve_to_json(curve), "seed": cfg.seed, "reports": sub, "pass": ok}
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_abel(curve: HyperellipticCurve, cfg: RunConfig, args) -> tuple[dict, int]:
    if args.divisor and args.function:
        raise InputError("give either --divisor or --function, not both")
    if args.function:
        D = divisor_of_function(curve, parse_function(args.function))
    elif args.divisor:
        D = divisor_from_json(_load_json_arg(args.divisor), curve)
    else:
        raise InputError("abel needs --divisor or --function")
    O = point_from_json(_load_json_arg(args.base)) if args.base else aj.default_base(curve)
    P, L = _pipeline(curve, cfg)
    u = aj.abel_divisor(curve, P, L, O, D)
    out = {"curve": curve_to_json(curve), "base": point_to_json(O), "divisor": divisor_to_json(D),
           **jacobian_point_to_json(u)}
    return out, EXIT_OK


def cmd_invert(curve: HyperellipticCurve, cfg: RunConfig, args) -> tuple[dict, int]:
    if not args.target:
        raise InputError("invert needs --target")
    xi = parse_vector(_load_json_arg(args.target))
    if xi.shape[0] != curve.genus:
        raise InputError(f"target has dimension {xi.shape[0]}, genus is {curve.genus}")
    P, L = _pipeline(curve, cfg)
    rng = np.random.default_rng(cfg.seed)
    if args.base_points:
        base = tuple(curve.canonical(point_from_json(p)) for p in _load_json_arg(args.base_points))
    else:
        base = aj.choose_base_tuple(curve, rng)
    res = aj.jacobi_invert_local(curve, P, L, base, xi, tol=cfg.tol["newton"], order=cfg.order)
    u = aj.abel_divisor(curve, P, L, base[0], aj.inversion_divisor(base, res.points))
    fwd = lattice_distance(L, u.value - xi)
    ok = fwd < cfg.tol["newton"]
    out = {"curve": curve_to_json(curve), "target": cx_array(xi),
           "base_points": [point_to_json(p) for p in base],
           "points": [point_to_json(p) for p in res.points],
           "residual": res.residual, "iterations": res.iterations,
           "forward_distance": fwd, "pass": ok}
    return out, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"periods": cmd_periods, "verify": cmd_verify, "abel": cmd_abel, "invert": cmd_invert}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", required=True, help="inline polynomial, curve JSON, or a file holding either")
    common.add_argument("--config", help="JSON run configuration file")
    common.add_argument("--seed", type=int, help="seed for sampled checks (default 0)")
    common.add_argument("--order", type=int, help="Gauss-Legendre order (>= 8)")
    common.add_argument("--tol", action="append", metavar="NAME=VAL", help="override a tolerance")
    common.add_argument("--out", help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="abeljacobi",
                                description="Period matrices and the Abel-Jacobi map of y^2 = f(x).")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("periods", parents=[common], help="period matrices and Riemann relations")
    sub.add_parser("verify", parents=[common], help="run all verification suites")
    pa = sub.add_parser("abel", parents=[common], help="Abel-Jacobi image of a degree-zero divisor")
    pa.add_argument("--divisor", help="divisor JSON (inline or file)")
    pa.add_argument("--function", help='principal divisor of a function, e.g. "(x-2)" or "y/(x-1)^2"')
    pa.add_argument("--base", help="base point JSON (default: first branch point)")
    pi = sub.add_parser("invert", parents=[common], help="local Jacobi inversion")
    pi.add_argument("--target", help="target vector as a JSON list of [re, im]")
    pi.add_argument("--base-points", help="JSON list of g base points (default: sampled)")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    out_path = args.out
    try:
        cfg = load_config(args)
        out_path = cfg.out
        curve = load_curve(args.curve, cfg)
        result, code = COMMANDS[args.command](curve, cfg, args)
    except InputError as exc:
        return _fail(exc, EXIT_INPUT, out_path)
    except (VerificationFailure, NoConvergence, LeftChart) as exc:
        return _fail(exc, EXIT_FAIL, out_path)
    except (NumericalError, AbelJacobiError) as exc:
        return _fail(exc, EXIT_NUMERIC, out_path)
    except OSError as exc:
        return _fail(exc, EXIT_INPUT, out_path)
    except Exception as exc:  # noqa: BLE001 - any other failure is an internal error
        return _fail(exc, EXIT_NUMERIC, out_path)
    _emit(dumps(result), out_path)
    return code


def _fail(exc: BaseException, code: int, out_path: str | None) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    _emit(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}), out_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
