"""Homology of the curve: pair cycles, intersection numbers, symplectic bases.

Raw cycles encircle consecutive pairs of branch points ``{e_i, e_i+1}`` in
the sorted order.  Each is realised as a "dumbbell": the planned route from
``e_i`` to ``e_i+1`` trimmed at radius ``rho``, a full circle around
``e_i+1``, the route back (now on the other sheet) and a full circle around
``e_i``.  The routes form an x-monotone chain, so distinct routes never cross
except where a detour arc and a neighbouring route cancel algebraically.

Intersection numbers follow the complex orientation: ``a # b = +1`` when the
tangents ``(a', b')`` at a crossing form a positively oriented frame of the
x-plane and both lifts sit on the same sheet there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .curve import HyperellipticCurve
from .errors import AmbiguousCrossing, NotUnimodular, VerificationFailure
from .paths import (
    DEFAULT_CLEARANCE,
    Arc,
    Segment,
    XPath,
    _planned_pieces,
    _radius,
    continue_y,
    path_from_pieces,
)

CROSSING_EPS = 1e-9
POLYLINE_ANGLE = math.pi / 90


@dataclass(frozen=True)
class Cycle:
    """A closed cycle realised as a closed x-path with a starting y value."""

    loop_word: tuple[tuple[int, int], ...]
    path: XPath
    y_start: complex

    @property
    def pair(self) -> tuple[int, int]:
        i = self.loop_word[0][0]
        return i, i + 1


def standard_form(g: int) -> np.ndarray:
    """``J = [[0, I], [-I, 0]]``."""
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    J[:g, g:] = np.eye(g, dtype=np.int64)
    J[g:, :g] = -np.eye(g, dtype=np.int64)
    return J


def _pair_cycle(curve: HyperellipticCurve, i: int, r: float, rho: float) -> Cycle:
    roots = curve.roots
    e0, e1 = complex(roots[i]), complex(roots[i + 1])
    route = _planned_pieces(curve, e0, e1, r, skip=(i, i + 1))
    first, last = route[0], route[-1]
    # both end pieces are straight and longer than r > rho
    assert isinstance(first, Segment) and isinstance(last, Segment)
    u0 = (first.b - first.a) / abs(first.b - first.a)
    u1 = (last.b - last.a) / abs(last.b - last.a)
    p0 = e0 + rho * u0
    p1 = e1 - rho * u1
    route = [Segment(p0, first.b)] + route[1:] if len(route) > 1 else [Segment(p0, p1)]
    if len(route) > 1:
        route[-1] = Segment(route[-1].a, p1)
    back = [p.reversed() for p in reversed(route)]
    th1 = math.atan2(-u1.imag, -u1.real)
    th0 = math.atan2(u0.imag, u0.real)
    pieces = route + [Arc(e1, rho, th1, 2 * math.pi)] + back + [Arc(e0, rho, th0, 2 * math.pi)]
    path = path_from_pieces(curve, pieces)
    y0 = complex(np.sqrt(complex(curve.f(p0))))
    return Cycle(((i, 1),), path, y0)


def build_cycles(curve: HyperellipticCurve, clearance_fraction: float = DEFAULT_CLEARANCE) -> list[Cycle]:
    """The 2g raw pair cycles, each checked to close up on the surface."""
    r = _radius(curve, clearance_fraction)
    out = []
    for i in range(2 * curve.genus):
        # adjacent cycles share a branch point; distinct radii keep them transversal
        rho = r * (0.35 if i % 2 == 0 else 0.7)
        cyc = _pair_cycle(curve, i, r, rho)
        y_end = continue_y(curve, cyc.path, cyc.y_start)
        if abs(y_end - cyc.y_start) > 1e-8 * max(1.0, abs(cyc.y_start)):
            raise VerificationFailure(f"cycle {i} does not close on the surface")
        out.append(cyc)
    return out


# ---------------------------------------------------------------- intersections

def lifted_polyline(curve: HyperellipticCurve, cycle: Cycle,
                    max_angle: float = POLYLINE_ANGLE) -> tuple[np.ndarray, np.ndarray]:
    """Polyline vertices of a cycle with the continued y at each vertex.

    y is carried from vertex to vertex along the chords, which are short
    compared with the distance to every branch point.
    """
    xs = cycle.path.polyline(max_angle)
    ys = np.empty(len(xs), dtype=complex)
    ys[0] = cycle.y_start
    roots = curve.roots
    for k in range(1, len(xs)):
        ys[k] = ys[k - 1] * kernels.continuation_ratio(xs[k:k + 1], roots, xs[k - 1])[0]
    return xs, ys


def _same_sheet(ya: complex, yb: complex) -> bool:
    return abs(ya - yb) < abs(ya + yb)


def crossing_number(curve: HyperellipticCurve, A: tuple[np.ndarray, np.ndarray],
                    B: tuple[np.ndarray, np.ndarray]) -> int:
    """Signed count of surface crossings of two lifted polylines."""
    xa, ya = A
    xb, yb = B
    i, j, s, t, den = kernels.segment_crossings(xa[:-1], xa[1:], xb[:-1], xb[1:], CROSSING_EPS)
    total = 0
    roots = curve.roots
    for k in range(len(i)):
        sk, tk = s[k], t[k]
        if min(abs(sk), abs(1 - sk), abs(tk), abs(1 - tk)) < CROSSING_EPS:
            raise AmbiguousCrossing(f"crossing at a polyline vertex near x = {xa[i[k]]}")
        da = xa[i[k] + 1] - xa[i[k]]
        db = xb[j[k] + 1] - xb[j[k]]
        if abs(den[k]) < CROSSING_EPS * abs(da) * abs(db):
            raise AmbiguousCrossing(f"tangential crossing near x = {xa[i[k]]}")
        xq = xa[i[k]] + sk * da
        yqa = ya[i[k]] * kernels.continuation_ratio(np.array([xq]), roots, xa[i[k]])[0]
        yqb = yb[j[k]] * kernels.continuation_ratio(np.array([xq]), roots, xb[j[k]])[0]
        if _same_sheet(yqa, yqb):
            total += 1 if den[k] > 0 else -1
    return total


def intersection_matrix(curve: HyperellipticCurve, cycles: Sequence[Cycle]) -> np.ndarray:
    """``M[i, j] = cycles[i] # cycles[j]`` from signed crossings of the realised paths."""
    n = len(cycles)
    lifted = [lifted_polyline(curve, c) for c in cycles]
    M = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if a != b:
                M[a, b] = crossing_number(curve, lifted[a], lifted[b])
    if not np.array_equal(M, -M.T):
        raise AmbiguousCrossing("crossing counts are not antisymmetric; perturb the clearance")
    return M


# ---------------------------------------------------------------- symplectic reduction

def integer_det(M) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination)."""
    A = [[int(v) for v in row] for row in np.asarray(M)]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def symplectic_normalize(M) -> np.ndarray:
    """Unimodular integer ``T`` with ``T @ M @ T.T == J``.

    Symplectic Gram-Schmidt over the integers: take the first remaining
    vector ``u``, use Euclidean reduction among the others until exactly one
    ``v`` pairs with ``u`` (necessarily to +-1 for a unimodular form), orient
    the pair so ``<a, b> = +1`` (swapping rather than negating), and clear
    the pair from every remaining vector.
    """
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n) or n % 2 or not np.array_equal(M, -M.T):
        raise NotUnimodular("intersection matrix must be square, even-sized and antisymmetric")
    g = n // 2
    Mi = [[int(v) for v in row] for row in M]

    def form(u, v):
        return sum(u[i] * Mi[i][j] * v[j] for i in range(n) if u[i] for j in range(n) if v[j])

    remaining = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    a_vecs, b_vecs = [], []
    for _ in range(g):
        u = remaining.pop(0)
        while True:
            vals = [form(u, w) for w in remaining]
            nz = [k for k, c in enumerate(vals) if c != 0]
            if not nz:
                raise NotUnimodular("intersection form is degenerate")
            m = min(nz, key=lambda k: (abs(vals[k]), k))
            if all(k == m or vals[k] == 0 for k in nz):
                break
            for k in nz:
                if k != m:
                    q = vals[k] // vals[m]
                    remaining[k] = [x - q * y for x, y in zip(remaining[k], remaining[m])]
        c = vals[m]
        if abs(c) != 1:
            raise NotUnimodular(f"intersection form is not unimodular (pairing {c})")
        v = remaining.pop(m)
        a, b = (u, v) if c == 1 else (v, u)
        a_vecs.append(a)
        b_vecs.append(b)
        new = []
        for w in remaining:
            wb, wa = form(w, b), form(w, a)
            new.append([x - wb * p + wa * q for x, p, q in zip(w, a, b)])
        remaining = new
    T = np.array(a_vecs + b_vecs, dtype=np.int64)
    if not np.array_equal(T @ M @ T.T, standard_form(g)):
        raise NotUnimodular("symplectic reduction failed")
    return T


@dataclass(frozen=True)
class SymplecticBasis:
    """Basis ``(a_1..a_g, b_1..b_g)`` as integer combinations of raw cycles.

    Row ``i`` of ``transform`` expresses basis cycle ``i`` in the raw cycles.
    """

    raw_cycles: tuple[Cycle, ...]
    intersection: np.ndarray
    transform: np.ndarray

    @property
    def genus(self) -> int:
        return len(self.raw_cycles) // 2

    def loop_words(self) -> list[list[tuple[int, int]]]:
        return [[(int(k), int(c)) for k, c in enumerate(row) if c] for row in self.transform]

    def basis_intersection(self) -> np.ndarray:
        return self.transform @ self.intersection @ self.transform.T

    def to_json(self) -> dict:
        return {
            "raw_cycles": [{"pair": list(c.pair), "path": c.path.to_json(),
                            "y_start": [c.y_start.real, c.y_start.imag]} for c in self.raw_cycles],
            "intersection": self.intersection.tolist(),
            "transform": self.transform.tolist(),
            "loop_words": [[list(t) for t in w] for w in self.loop_words()],
        }


def symplectic_basis(curve: HyperellipticCurve,
                     clearance_fraction: float = DEFAULT_CLEARANCE) -> SymplecticBasis:
    cycles = build_cycles(curve, clearance_fraction)
    M = intersection_matrix(curve, cycles)
    T = symplectic_normalize(M)
    return SymplecticBasis(tuple(cycles), M, T)
