"""Independent genus-1 periods from the arithmetic-geometric mean.

For ``y**2 = c (x - e1)(x - e2)(x - e3)`` put ``a = sqrt(e1 - e3)``,
``b = sqrt(e1 - e2)``, ``d = sqrt(e2 - e3)`` with signs flipped so that
``|a - b| <= |a + b|`` and ``|a - d| <= |a + d|``.  Then

    omega1 = K / (sqrt(c) * agm(a, b)),   omega2 = i K / (sqrt(c) * agm(a, d))

span the period lattice of ``dx / y`` with ``K = PERIOD_CONSTANT = 2 pi``.
The constant was fixed by matching quadrature of the cycle around
``[-1, 0]`` on ``y**2 = x**3 - x`` and is checked against quadrature in the
tests.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .curve import HyperellipticCurve
from .errors import DimensionMismatch, NoConvergence, WrongGenus, ZeroInput
from .lattice import PeriodLattice, lattice_distance, lattice_from_generators

PERIOD_CONSTANT = 2 * math.pi
AGM_TOL = 1e-15
AGM_MAX_ITER = 60


def _optimal_sqrt(p: complex, a: complex) -> complex:
    g = cmath.sqrt(p)
    dm, dp = abs(g - a), abs(g + a)
    if dp < dm or (dp == dm and (g / a).real < 0):
        g = -g
    return g


def agm(a: complex, b: complex, tol: float = AGM_TOL, max_iter: int = AGM_MAX_ITER,
        return_steps: bool = False):
    """Arithmetic-geometric mean on the optimal branch.

    Each step keeps the geometric mean ``g`` with ``|g - a| <= |g + a|``,
    ties broken towards ``Re(g / a) >= 0``.
    """
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise ZeroInput("agm needs nonzero arguments")
    for k in range(max_iter):
        if abs(a - b) <= tol * abs(a):
            return (a, k) if return_steps else a
        a, b = 0.5 * (a + b), _optimal_sqrt(a * b, 0.5 * (a + b))
    raise NoConvergence(f"agm did not converge in {max_iter} steps")


@dataclass(frozen=True)
class EllipticPeriods:
    omega1: complex
    omega2: complex

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def lattice(self) -> PeriodLattice:
        return lattice_from_generators([[self.omega1], [self.omega2]])


def _flip(u: complex, v: complex) -> complex:
    return -v if abs(u - v) > abs(u + v) else v


def elliptic_periods_agm(curve: HyperellipticCurve) -> EllipticPeriods:
    """Fundamental periods of ``dx / y`` on a genus-1 curve, ordered so ``Im tau > 0``."""
    if curve.genus != 1:
        raise WrongGenus(f"AGM periods need genus 1, got {curve.genus}")
    e1, e2, e3 = (complex(e) for e in curve.roots)
    a = cmath.sqrt(e1 - e3)
    b = _flip(a, cmath.sqrt(e1 - e2))
    d = _flip(a, cmath.sqrt(e2 - e3))
    s = cmath.sqrt(curve.leading)
    w1 = PERIOD_CONSTANT / (s * agm(a, b))
    w2 = 1j * PERIOD_CONSTANT / (s * agm(a, d))
    if (w2 / w1).imag < 0:
        w2 = -w2
    return EllipticPeriods(w1, w2)


def lattice_equivalent(L1: PeriodLattice, L2: PeriodLattice, tol: float) -> bool:
    """True iff each lattice's generators lie within ``tol`` of the other lattice."""
    if L1.genus != L2.genus:
        raise DimensionMismatch(f"genus {L1.genus} vs genus {L2.genus}")
    return all(lattice_distance(L2, v) < tol for v in L1.generators) and \
        all(lattice_distance(L1, v) < tol for v in L2.generators)


def random_unimodular(n: int, rng: np.random.Generator, steps: int = 12) -> np.ndarray:
    """A random integer matrix of determinant +-1 built from elementary moves."""
    M = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        M[i] += int(rng.integers(-2, 3)) * M[j]
    if rng.random() < 0.5:
        M[0] = -M[0]
    return M
