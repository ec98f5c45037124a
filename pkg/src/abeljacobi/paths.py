"""Contours in the x-plane, sheet tracking of y = sqrt(f(x)), and integration.

A path is a chain of straight segments and circular arcs.  Along every
segment, and along every arc piece of sweep at most ``pi/4`` whose cap holds
no branch point, the continuation of ``y`` from an anchor ``(x0, y0)`` is

    y(x) = y0 * prod_i sqrt((x - e_i) / (x0 - e_i))

with principal square roots, because no factor can wind past the negative
real axis there.  Every routine below works piece by piece on that basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from . import kernels
from .curve import CurvePoint, HyperellipticCurve
from .errors import (
    BranchTooClose,
    EndpointAtInfinity,
    InconsistentStart,
    InputError,
    NoRouteFound,
    PathNotClosed,
    QuadratureNotConverged,
)

DEFAULT_CLEARANCE = 0.25
DEFAULT_ORDER = 32
DEFAULT_MAX_DEPTH = 12
DEFAULT_QUAD_TOL = 1e-13
MAX_ARC_SWEEP = math.pi / 4
MAX_STEP_ARG = math.pi / 2
MAX_STEP_HALVINGS = 30


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[0, 1]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


# ---------------------------------------------------------------- pieces

@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    @property
    def start(self) -> complex:
        return self.a

    @property
    def end(self) -> complex:
        return self.b

    @property
    def length(self) -> float:
        return abs(self.b - self.a)

    def at(self, s):
        return self.a + (self.b - self.a) * s

    def deriv(self, s):
        return np.full(np.shape(s), self.b - self.a, dtype=complex)

    def sub(self, s0: float, s1: float) -> "Segment":
        return Segment(complex(self.at(s0)), complex(self.at(s1)))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def split(self) -> list["Segment"]:
        return [self]

    def polyline(self, max_angle: float) -> np.ndarray:
        return np.array([self.a, self.b])

    def distance_to(self, p: complex) -> float:
        d = self.b - self.a
        if d == 0:
            return abs(p - self.a)
        t = ((p - self.a) * d.conjugate()).real / abs(d) ** 2
        t = min(1.0, max(0.0, t))
        return abs(self.a + t * d - p)

    def to_json(self):
        return {"type": "segment", "a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}


@dataclass(frozen=True)
class Arc:
    """Arc ``center + radius * exp(i*theta)`` for theta from ``theta0`` to ``theta0 + sweep``."""

    center: complex
    radius: float
    theta0: float
    sweep: float

    @property
    def start(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.theta0), math.sin(self.theta0))

    @property
    def end(self) -> complex:
        th = self.theta0 + self.sweep
        return self.center + self.radius * complex(math.cos(th), math.sin(th))

    @property
    def length(self) -> float:
        return abs(self.sweep) * self.radius

    def at(self, s):
        return self.center + self.radius * np.exp(1j * (self.theta0 + self.sweep * np.asarray(s)))

    def deriv(self, s):
        return 1j * self.sweep * self.radius * np.exp(1j * (self.theta0 + self.sweep * np.asarray(s)))

    def sub(self, s0: float, s1: float) -> "Arc":
        return Arc(self.center, self.radius, self.theta0 + self.sweep * s0, self.sweep * (s1 - s0))

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.theta0 + self.sweep, -self.sweep)

    def split(self) -> list["Arc"]:
        n = max(1, math.ceil(abs(self.sweep) / MAX_ARC_SWEEP - 1e-12))
        return [self.sub(i / n, (i + 1) / n) for i in range(n)]

    def polyline(self, max_angle: float) -> np.ndarray:
        # odd chord count and a deterministic jitter keep interior vertices off
        # symmetry lines (e.g. the real axis for real branch points)
        n = max(1, math.ceil(abs(self.sweep) / max_angle))
        n += 1 - n % 2
        k = np.arange(n + 1)
        s = (k + 0.25 * np.sin(1.0 + 2.399963 * k)) / n
        s[0], s[-1] = 0.0, 1.0
        pts = self.at(s)
        pts[0], pts[-1] = self.start, self.end
        return pts

    def distance_to(self, p: complex) -> float:
        v = p - self.center
        if abs(v) == 0:
            return self.radius
        phi = math.atan2(v.imag, v.real)
        # is the direction of p inside the swept angular range?
        lo = min(self.theta0, self.theta0 + self.sweep)
        rel = (phi - lo) % (2 * math.pi)
        if abs(self.sweep) >= 2 * math.pi or rel <= abs(self.sweep):
            return abs(abs(v) - self.radius)
        return min(abs(p - self.start), abs(p - self.end))

    def to_json(self):
        return {"type": "arc", "center": [self.center.real, self.center.imag],
                "radius": self.radius, "theta0": self.theta0, "sweep": self.sweep}


Piece = Union[Segment, Arc]


@dataclass(frozen=True)
class XPath:
    """A path in the x-plane.

    ``start_branch`` / ``end_branch`` hold the index of the branch point the
    path terminates at, or ``None`` for an ordinary end.
    """

    pieces: tuple[Piece, ...]
    start_x: complex
    end_x: complex
    start_branch: int | None = None
    end_branch: int | None = None
    clearance: float = math.inf

    @property
    def is_empty(self) -> bool:
        return len(self.pieces) == 0

    @property
    def is_closed(self) -> bool:
        return self.start_branch is None and self.end_branch is None and \
            abs(self.start_x - self.end_x) <= 1e-12 * max(1.0, abs(self.start_x))

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    @property
    def endpoint_kinds(self) -> tuple[str, str]:
        return ("branch-terminal" if self.start_branch is not None else "ordinary",
                "branch-terminal" if self.end_branch is not None else "ordinary")

    def reversed(self) -> "XPath":
        return XPath(tuple(p.reversed() for p in reversed(self.pieces)), self.end_x, self.start_x,
                     self.end_branch, self.start_branch, self.clearance)

    def __add__(self, other: "XPath") -> "XPath":
        if self.end_branch is not None or other.start_branch is not None:
            raise InputError("cannot join paths through a branch point")
        if abs(self.end_x - other.start_x) > 1e-12 * max(1.0, abs(self.end_x)):
            raise InputError("paths do not share an endpoint")
        return XPath(self.pieces + other.pieces, self.start_x, other.end_x,
                     self.start_branch, other.end_branch, min(self.clearance, other.clearance))

    def polyline(self, max_angle: float = math.pi / 360) -> np.ndarray:
        """Vertices of a polygonal approximation (arcs cut into short chords)."""
        if self.is_empty:
            return np.array([self.start_x])
        parts = [p.polyline(max_angle) for p in self.pieces]
        out = [parts[0]]
        for q in parts[1:]:
            out.append(q[1:])
        return np.concatenate(out)

    def to_json(self):
        return {"segments": [p.to_json() for p in self.pieces],
                "start": [self.start_x.real, self.start_x.imag],
                "end": [self.end_x.real, self.end_x.imag],
                "start_branch": self.start_branch, "end_branch": self.end_branch}


def path_from_pieces(curve: HyperellipticCurve, pieces: Sequence[Piece],
                     start_branch: int | None = None, end_branch: int | None = None) -> XPath:
    """Assemble an :class:`XPath` and measure its clearance."""
    pieces = tuple(pieces)
    if not pieces:
        raise InputError("use empty_path for zero-length paths")
    for p, q in zip(pieces, pieces[1:]):
        if abs(p.end - q.start) > 1e-10 * max(1.0, abs(p.end)):
            raise InputError("consecutive pieces do not share endpoints")
    return XPath(pieces, pieces[0].start, pieces[-1].end, start_branch, end_branch,
                 _clearance(curve, pieces, start_branch, end_branch))


def empty_path(x: complex, branch: int | None = None) -> XPath:
    return XPath((), x, x, branch, branch, math.inf)


def _clearance(curve, pieces, start_branch, end_branch) -> float:
    best = math.inf
    last = len(pieces) - 1
    for k, p in enumerate(pieces):
        for i, e in enumerate(curve.roots):
            if (k == 0 and i == start_branch) or (k == last and i == end_branch):
                continue
            best = min(best, p.distance_to(complex(e)))
    return best


# ---------------------------------------------------------------- planning

def _radius(curve: HyperellipticCurve, clearance_fraction: float) -> float:
    if not 0 < clearance_fraction < 0.5:
        raise NoRouteFound(f"clearance fraction {clearance_fraction} must lie in (0, 0.5)")
    return clearance_fraction * curve.discriminant_margin


def _planned_pieces(curve: HyperellipticCurve, a: complex, b: complex, r: float,
                    skip: Sequence[int] = ()) -> list[Piece]:
    """Segment ``a -> b`` with minor-arc detours around nearby branch points.

    A minor arc together with the chord it replaces bounds a cap that holds
    no branch point, so the detoured path is homotopic to the chord.
    """
    if a == b:
        return []
    d = b - a
    L2 = abs(d) ** 2
    cuts = []
    for i, e in enumerate(curve.roots):
        if i in skip:
            continue
        e = complex(e)
        t = ((e - a) * d.conjugate()).real / L2
        dist = abs(a + t * d - e)
        # stay clear of the endpoints themselves
        re = min(r, 0.5 * abs(a - e), 0.5 * abs(b - e))
        if dist >= re:
            continue
        h = math.sqrt(re * re - dist * dist) / math.sqrt(L2)
        t0, t1 = t - h, t + h
        if t1 <= 0 or t0 >= 1:
            continue
        cuts.append((t0, t1, e, re))
    cuts.sort()
    pieces: list[Piece] = []
    cur = a
    for t0, t1, e, re in cuts:
        p0 = a + t0 * d
        p1 = a + t1 * d
        if p0 != cur:
            pieces.append(Segment(cur, p0))
        th0 = math.atan2((p0 - e).imag, (p0 - e).real)
        sweep = float(np.angle((p1 - e) / (p0 - e)))
        pieces.append(Arc(e, re, th0, sweep))
        cur = pieces[-1].end
    if cur != b:
        pieces.append(Segment(cur, b))
    return pieces


def planned_segment(curve: HyperellipticCurve, a: complex, b: complex,
                    clearance_fraction: float = DEFAULT_CLEARANCE) -> XPath:
    """Ordinary path from ``a`` to ``b`` detouring around branch points.

    The detour radius is ``clearance_fraction * margin``, shrunk to half the
    distance from a branch point to an endpoint when that is smaller.
    """
    r = _radius(curve, clearance_fraction)
    pieces = _planned_pieces(curve, complex(a), complex(b), r)
    if not pieces:
        return empty_path(complex(a))
    return path_from_pieces(curve, pieces)


def polygon_path(curve: HyperellipticCurve, vertices: Sequence[complex],
                 clearance_fraction: float = DEFAULT_CLEARANCE, closed: bool = True) -> XPath:
    """Planned polygonal path through ``vertices`` (closed by default)."""
    r = _radius(curve, clearance_fraction)
    vs = [complex(v) for v in vertices]
    if closed:
        vs.append(vs[0])
    pieces: list[Piece] = []
    for a, b in zip(vs, vs[1:]):
        pieces += _planned_pieces(curve, a, b, r)
    return path_from_pieces(curve, pieces)


def circle_path(curve: HyperellipticCurve, center: complex, radius: float, theta0: float = 0.0,
                turns: float = 1.0) -> XPath:
    return path_from_pieces(curve, [Arc(complex(center), float(radius), theta0, 2 * math.pi * turns)])


def lasso(curve: HyperellipticCurve, x: complex,
          clearance_fraction: float = DEFAULT_CLEARANCE) -> XPath:
    """Closed path from ``x`` once around its nearest branch point.

    Its lift swaps the sheets, which is how paths are steered onto the
    requested sheet of their endpoint.
    """
    r = _radius(curve, clearance_fraction)
    i = int(np.argmin(np.abs(curve.roots - x)))
    e = complex(curve.roots[i])
    dist = abs(x - e)
    rho = min(r, 0.5 * dist)
    u = (x - e) / dist
    q = e + rho * u
    pieces = _planned_pieces(curve, x, q, r, skip=(i,))
    pieces.append(Arc(e, rho, math.atan2(u.imag, u.real), 2 * math.pi))
    pieces += _planned_pieces(curve, q, x, r, skip=(i,))
    return path_from_pieces(curve, pieces)


def plan_path(curve: HyperellipticCurve, start: CurvePoint, end: CurvePoint,
              clearance_fraction: float = DEFAULT_CLEARANCE) -> XPath:
    """Path from ``start`` to ``end`` whose lift lands on the sheet of ``end``.

    When ``start`` is finite the lift starts at ``curve.y(start)``; if the
    straight route would arrive on the wrong sheet a lasso around the branch
    point nearest to ``end`` is appended.  Paths starting at a branch point
    are lifted so that they end on ``end`` (see :func:`integrate_path`).
    """
    if start.is_infinity or end.is_infinity:
        raise EndpointAtInfinity("paths to or from infinity are not supported")
    start = curve.canonical(start)
    end = curve.canonical(end)
    r = _radius(curve, clearance_fraction)
    sb = curve.branch_index(start.x) if start.is_branch else None
    eb = curve.branch_index(end.x) if end.is_branch else None
    if start == end:
        return empty_path(start.x, sb)
    skip = tuple(i for i in (sb, eb) if i is not None)
    a, b = start.x, end.x
    if sb is not None and eb is not None and sb == eb:
        return empty_path(a, sb)
    pieces = _planned_pieces(curve, a, b, r, skip=skip)
    if not pieces:
        # same x, opposite sheets: go around a branch point and back
        return lasso(curve, a, clearance_fraction)
    path = path_from_pieces(curve, pieces, sb, eb)
    if start.kind == "finite" and end.kind == "finite":
        y_end = continue_y(curve, path, curve.y(start))
        if end.sheet != curve.sheet_of(end.x, y_end):
            path = path + lasso(curve, b, clearance_fraction)
    return path


# ---------------------------------------------------------------- continuation

def _sub_pieces(path: XPath) -> list[Piece]:
    out: list[Piece] = []
    for p in path.pieces:
        out.extend(p.split())
    return out


def _check_start(curve: HyperellipticCurve, x: complex, y: complex) -> None:
    fx = complex(curve.f(x))
    if abs(y * y - fx) > 1e-9 * max(1.0, abs(fx)):
        raise InconsistentStart(f"y = {y} does not square to f({x}) = {fx}")


def _step_y(curve: HyperellipticCurve, piece: Piece, y0: complex) -> complex:
    """Continue ``y`` across one sub-piece, stepping with |d arg f| < pi/2."""
    roots = curve.roots
    s = 0.0
    x_prev = piece.start
    y = y0
    h = 1.0
    halvings = 0
    while s < 1.0:
        s_next = min(1.0, s + h)
        x_next = complex(piece.at(s_next)) if s_next < 1.0 else piece.end
        darg = kernels.arg_increment(x_prev, x_next, roots)
        if abs(darg) >= MAX_STEP_ARG:
            h *= 0.5
            halvings += 1
            if halvings > MAX_STEP_HALVINGS:
                raise BranchTooClose(f"cannot continue y near x = {x_prev}")
            continue
        y = y * complex(kernels.continuation_ratio(np.array([x_next]), roots, x_prev)[0])
        x_prev, s = x_next, s_next
    return y


def continue_y(curve: HyperellipticCurve, path: XPath, y_start: complex) -> complex:
    """Analytic continuation of ``y`` along an ordinary-ended path."""
    if path.start_branch is not None or path.end_branch is not None:
        raise InputError("continue_y needs a path with ordinary endpoints")
    _check_start(curve, path.start_x, y_start)
    y = complex(y_start)
    for piece in _sub_pieces(path):
        y = _step_y(curve, piece, y)
    return y


def y_along(curve: HyperellipticCurve, path: XPath, y_start: complex) -> list[tuple[Piece, complex]]:
    """Sub-pieces of ``path`` paired with the continued y at each sub-piece start."""
    out = []
    y = complex(y_start)
    for piece in _sub_pieces(path):
        out.append((piece, y))
        y = _step_y(curve, piece, y)
    return out


def winding_numbers(curve: HyperellipticCurve, path: XPath) -> np.ndarray:
    """Winding number of a closed path around each branch point."""
    if not path.is_closed:
        raise PathNotClosed("winding numbers need a closed path")
    roots = curve.roots
    total = np.zeros(len(roots))
    for piece in _sub_pieces(path):
        pts = piece.polyline(math.pi / 16)
        for x0, x1 in zip(pts[:-1], pts[1:]):
            total += np.angle((x1 - roots) / (x0 - roots))
    return np.rint(total / (2 * math.pi)).astype(int)


def enclosed_branch_parity(curve: HyperellipticCurve, path: XPath) -> tuple[int, int]:
    """Total winding around the branch points and its parity (0 even, 1 odd)."""
    count = int(np.sum(winding_numbers(curve, path)))
    return count, count % 2


# ---------------------------------------------------------------- integration

@dataclass
class IntegrationResult:
    values: np.ndarray
    error: float
    y_end: complex
    nodes: int = 0
    pieces: list = field(default_factory=list)


class _Quad:
    def __init__(self, curve: HyperellipticCurve, order: int, tol: float, max_depth: int):
        self.curve = curve
        self.g = curve.genus
        self.nodes, self.weights = gauss_legendre(order)
        self.tol = tol
        self.max_depth = max_depth
        self.evals = 0

    def _rule(self, xs_fn, dx_fn, s0, s1, roots, x0, y0):
        s = s0 + (s1 - s0) * self.nodes
        xs = xs_fn(s)
        dxw = dx_fn(s) * (self.weights * (s1 - s0))
        self.evals += len(s)
        return kernels.piece_integrals(xs, dxw, roots, x0, y0, self.g)

    def adaptive(self, xs_fn, dx_fn, roots, x0, y0, scale=1.0):
        """Adaptive composite Gauss-Legendre on ``[0, 1]``.

        Returns ``(values, error_estimate)``; the estimate is the summed
        difference between each accepted panel and its two halves.
        """
        total = np.zeros(self.g, dtype=complex)
        err = 0.0
        stack = [(0.0, 1.0, 0, self._rule(xs_fn, dx_fn, 0.0, 1.0, roots, x0, y0))]
        while stack:
            a, b, depth, whole = stack.pop()
            m = 0.5 * (a + b)
            left = self._rule(xs_fn, dx_fn, a, m, roots, x0, y0)
            right = self._rule(xs_fn, dx_fn, m, b, roots, x0, y0)
            halves = left + right
            diff = float(np.max(np.abs(halves - whole)))
            if diff <= self.tol * max(scale, float(np.max(np.abs(halves)))):
                total += halves
                err += diff
                continue
            if depth >= self.max_depth:
                raise QuadratureNotConverged(
                    f"no convergence on panel [{a:.3g}, {b:.3g}] (change {diff:.3g})")
            stack.append((m, b, depth + 1, right))
            stack.append((a, m, depth + 1, left))
        return total, err


def _terminal_integral(quad: _Quad, curve: HyperellipticCurve, e_idx: int, e: complex,
                       x1: complex, y1: complex):
    """Integral from the branch point ``e`` to ``x1`` (lift through ``y1``).

    Uses ``x = e + (x1 - e) u**2`` so the integrand is smooth in ``u``.
    """
    others = np.delete(curve.roots, e_idx)
    d = x1 - e
    xs_fn = lambda u: e + d * u * u  # noqa: E731
    dx_fn = lambda u: np.full(np.shape(u), 2.0 * d, dtype=complex)  # noqa: E731
    return quad.adaptive(xs_fn, dx_fn, others, x1, y1)


def integrate_path(curve: HyperellipticCurve, path: XPath, y_start: complex | None = None,
                   y_end: complex | None = None, order: int = DEFAULT_ORDER,
                   tol: float = DEFAULT_QUAD_TOL, max_depth: int = DEFAULT_MAX_DEPTH) -> IntegrationResult:
    """Integrals of all g basis forms along a lift of ``path``.

    Ordinary starts need ``y_start``.  For a path starting at a branch point
    the lift is fixed by ``y_end`` (required if the path ends at an ordinary
    point and a particular lift matters); without it the lift through the
    principal square root at the end of the first piece is used.
    """
    g = curve.genus
    quad = _Quad(curve, order, tol, max_depth)
    roots = curve.roots
    pieces = list(path.pieces)
    if not pieces:
        return IntegrationResult(np.zeros(g, dtype=complex), 0.0,
                                 0j if y_start is None else complex(y_start))
    # a single branch-to-branch segment is split so each half has one singular end
    if len(pieces) == 1 and path.start_branch is not None and path.end_branch is not None:
        pieces = [pieces[0].sub(0.0, 0.5), pieces[0].sub(0.5, 1.0)]

    total = np.zeros(g, dtype=complex)
    err = 0.0
    if path.start_branch is not None:
        first = pieces.pop(0)
        x1 = first.end
        y = np.sqrt(complex(curve.f(x1)))
        v, e = _terminal_integral(quad, curve, path.start_branch, first.start, x1, y)
        total += v
        err += e
    else:
        if y_start is None:
            raise InputError("an ordinary path start needs y_start")
        _check_start(curve, path.start_x, y_start)
        y = complex(y_start)

    last = pieces.pop() if path.end_branch is not None else None
    for piece in pieces:
        for sub in piece.split():
            v, e = quad.adaptive(sub.at, sub.deriv, roots, sub.start, y)
            total += v
            err += e
            y = _step_y(curve, sub, y)
    if last is not None:
        v, e = _terminal_integral(quad, curve, path.end_branch, last.end, last.start, y)
        total -= v
        err += e
        y = 0j

    if path.start_branch is not None and y_end is not None and path.end_branch is None:
        if abs(y - y_end) > abs(y + y_end):
            total = -total
            y = -y
    return IntegrationResult(total, err, y, quad.evals)


def integrate(curve: HyperellipticCurve, k: int, path: XPath, sheet_start: complex | None,
              order: int = DEFAULT_ORDER, tol: float = DEFAULT_QUAD_TOL) -> complex:
    """Integral of ``omega_k = x**(k-1) dx / y`` (1-based ``k``) along the lift of ``path``."""
    if not 1 <= k <= curve.genus:
        raise InputError(f"basis index {k} outside 1..{curve.genus}")
    return complex(integrate_path(curve, path, sheet_start, order=order, tol=tol).values[k - 1])


def integrate_rational(path: XPath, func, order: int = DEFAULT_ORDER,
                       tol: float = DEFAULT_QUAD_TOL, max_depth: int = DEFAULT_MAX_DEPTH) -> complex:
    """Integral of ``func(x) dx`` along ``path`` (no square roots involved)."""
    nodes, weights = gauss_legendre(order)
    total = 0j
    for piece in path.pieces:
        for sub in piece.split():
            stack = [(0.0, 1.0, 0)]
            while stack:
                a, b, depth = stack.pop()

                def rule(a, b):
                    s = a + (b - a) * nodes
                    return complex(np.sum(func(sub.at(s)) * sub.deriv(s) * weights) * (b - a))

                m = 0.5 * (a + b)
                whole, halves = rule(a, b), rule(a, m) + rule(m, b)
                if abs(whole - halves) <= tol * max(1.0, abs(halves)):
                    total += halves
                elif depth >= max_depth:
                    raise QuadratureNotConverged("rational integrand did not converge")
                else:
                    stack += [(m, b, depth + 1), (a, m, depth + 1)]
    return total
