"""The period lattice in C^g: real coordinates, reduction and distance."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, IllConditionedLattice

MEMBERSHIP_TOL = 1e-7
MAX_CONDITION = 1e12
SNAP = 1e-10


@dataclass(frozen=True)
class PeriodLattice:
    """Lattice spanned by ``2g`` generators (the rows of ``generators``).

    ``real_basis`` has the real and imaginary parts of generator ``k`` stacked
    in column ``k``, so ``real_basis @ coords`` is ``v`` in real form.
    """

    generators: np.ndarray
    real_basis: np.ndarray
    condition: float

    @property
    def genus(self) -> int:
        return self.generators.shape[1]

    @property
    def shortest_generator(self) -> float:
        return float(np.min(np.linalg.norm(self.generators, axis=1)))

    def to_json(self) -> dict:
        return {"generators": [[[z.real, z.imag] for z in row] for row in self.generators]}


def lattice_from_generators(generators) -> PeriodLattice:
    gens = np.asarray(generators, dtype=complex)
    n, g = gens.shape
    if n != 2 * g:
        raise DimensionMismatch(f"need 2g = {2 * g} generators, got {n}")
    real = np.vstack([gens.real.T, gens.imag.T])
    cond = float(np.linalg.cond(real))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedLattice(f"generators are not R-independent (condition {cond:.3g})")
    return PeriodLattice(gens, real, cond)


def period_lattice(periods) -> PeriodLattice:
    """Lattice of a :class:`~abeljacobi.periods.PeriodMatrices` (rows of A then B)."""
    return lattice_from_generators(np.vstack([periods.A, periods.B]))


def _as_vector(lattice: PeriodLattice, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != lattice.genus:
        raise DimensionMismatch(f"vector of length {v.shape[0]} in a genus-{lattice.genus} lattice")
    return v


def coordinates(lattice: PeriodLattice, v) -> np.ndarray:
    """All ``2g`` real coordinates of ``v`` in the generator basis."""
    v = _as_vector(lattice, v)
    rhs = np.concatenate([v.real, v.imag])
    c = np.linalg.solve(lattice.real_basis, rhs)
    resid = np.max(np.abs(lattice.real_basis @ c - rhs))
    if resid > 1e-10 * max(1.0, float(np.max(np.abs(rhs)))) * lattice.condition:
        raise IllConditionedLattice(f"real solve residual {resid:.3g}")
    return c


def real_coordinates(lattice: PeriodLattice, v) -> tuple[np.ndarray, np.ndarray]:
    """``(s, t)`` with ``v = sum s_k A_k + sum t_k B_k``."""
    c = coordinates(lattice, v)
    g = lattice.genus
    return c[:g], c[g:]


def from_coordinates(lattice: PeriodLattice, c) -> np.ndarray:
    return np.asarray(c, dtype=float) @ lattice.generators


def reduce_mod_lattice(lattice: PeriodLattice, v) -> np.ndarray:
    """Representative of ``v mod lattice`` with coordinates in ``[0, 1)``.

    Coordinates within ``SNAP`` of an integer are rounded first, so points
    that are numerically on the lattice reduce to zero rather than to a
    far corner of the fundamental cell.
    """
    c = coordinates(lattice, v)
    r = np.rint(c)
    c = np.where(np.abs(c - r) < SNAP, r, c)
    frac = c - np.floor(c)
    frac[frac >= 1.0] = 0.0
    return from_coordinates(lattice, frac)


@lru_cache(maxsize=8)
def _window(n: int) -> np.ndarray:
    return np.array(list(itertools.product((-1, 0, 1), repeat=n)), dtype=float)


def nearest_lattice_point(lattice: PeriodLattice, v) -> tuple[np.ndarray, np.ndarray]:
    """Closest point among the ``3**(2g)`` candidates around the rounded coordinates."""
    v = _as_vector(lattice, v)
    base = np.rint(coordinates(lattice, v))
    cands = base + _window(2 * lattice.genus)
    pts = cands @ lattice.generators
    d = np.linalg.norm(pts - v, axis=1)
    k = int(np.argmin(d))
    return cands[k], pts[k]


def lattice_distance(lattice: PeriodLattice, v) -> float:
    """Distance from ``v`` to the lattice (an upper bound; exact when well conditioned)."""
    v = _as_vector(lattice, v)
    _, p = nearest_lattice_point(lattice, v)
    return float(np.linalg.norm(v - p))


def is_lattice_point(lattice: PeriodLattice, v, tol: float = MEMBERSHIP_TOL) -> bool:
    return lattice_distance(lattice, v) < tol
