"""The Abel-Jacobi map, Abel's theorem checks and local Jacobi inversion.

Values of ``u_O`` are integrals of the holomorphic basis along planned
paths, taken modulo the period lattice.  The point at infinity never needs a
path: for a point ``p`` on a circle ``|x| = R`` enclosing every branch point,
the lift of that circle from ``p`` ends at ``sigma(p)`` and is homotopic (with
fixed ends) to the radial path ``p -> inf -> sigma(p)``.  Since
``sigma^* omega = -omega`` this gives ``int_p^inf omega = 1/2 oint omega``
exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

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
    differential_vector,
    divisor_of_function,
    finite_point,
    involution,
)
from .errors import (
    DimensionMismatch,
    InputError,
    LeftChart,
    NoConvergence,
    NonzeroDegree,
    PoleOnPath,
    SingularJacobianAtBase,
)
from .homology import SymplecticBasis
from .lattice import PeriodLattice, lattice_distance, reduce_mod_lattice
from .paths import (
    DEFAULT_CLEARANCE,
    DEFAULT_ORDER,
    Segment,
    XPath,
    circle_path,
    continue_y,
    integrate_path,
    integrate_rational,
    path_from_pieces,
    plan_path,
    planned_segment,
)
from .periods import PeriodMatrices

MEMBERSHIP_TOL = 1e-7
NEWTON_TOL = 1e-8
MAX_NEWTON_ITER = 20
MAX_HALVINGS = 8
CHART_FRACTION = 0.5
BASE_CONDITION_MAX = 1e6
BASE_DRAWS = 50
DLOG_TOL = 1e-8
POLISH = 1e-3


@dataclass(frozen=True)
class JacobianPoint:
    """A point of ``C^g / lattice`` with a representative and its reduction."""

    value: np.ndarray
    reduced: np.ndarray
    lattice: PeriodLattice = field(repr=False)

    @property
    def distance_to_zero(self) -> float:
        return lattice_distance(self.lattice, self.value)

    def __sub__(self, other: "JacobianPoint") -> "JacobianPoint":
        return jacobian_point(self.lattice, self.value - other.value)

    def __add__(self, other: "JacobianPoint") -> "JacobianPoint":
        return jacobian_point(self.lattice, self.value + other.value)


def jacobian_point(lattice: PeriodLattice, value) -> JacobianPoint:
    v = np.asarray(value, dtype=complex).reshape(-1)
    return JacobianPoint(v, reduce_mod_lattice(lattice, v), lattice)


class AbelMap:
    """``u_O`` for a fixed curve, period data and base point, with a point cache.

    The cache only lives as long as the object; the module keeps no shared
    state between calls.
    """

    def __init__(self, curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
                 base: CurvePoint, clearance_fraction: float = DEFAULT_CLEARANCE,
                 order: int = DEFAULT_ORDER):
        if base.is_infinity:
            raise InputError("the base point must be finite")
        self.curve = curve
        self.periods = periods
        self.lattice = lattice
        self.base = curve.canonical(base)
        self.clearance = clearance_fraction
        self.order = order
        self._columns = list(periods.forms.exponents)
        self._cache: dict[CurvePoint, np.ndarray] = {}

    def integrate(self, path: XPath, start: CurvePoint, end: CurvePoint | None = None) -> np.ndarray:
        """Integrals of the basis forms along ``path`` lifted from ``start``.

        For a path leaving a branch point the lift is chosen to arrive on ``end``.
        """
        y0 = None if start.kind != "finite" else self.curve.y(start)
        y1 = self.curve.y(end) if end is not None and end.kind == "finite" else None
        res = integrate_path(self.curve, path, y0, y_end=y1, order=self.order)
        return res.values[self._columns]

    def _to_point(self, P: CurvePoint) -> np.ndarray:
        path = plan_path(self.curve, self.base, P, self.clearance)
        return self.integrate(path, self.base, P)

    def _to_infinity(self) -> np.ndarray:
        curve = self.curve
        R = 2.0 * float(np.max(np.abs(curve.roots))) + curve.scale
        # an off-axis start keeps the radial leg away from symmetric root layouts
        theta = math.pi / 4 + 0.1
        p = R * complex(math.cos(theta), math.sin(theta))
        O = self.base
        leg = planned_segment(curve, O.x, p, self.clearance) if O.kind == "finite" else \
            plan_path(curve, O, finite_point(p, 1), self.clearance)
        if O.kind == "finite":
            res = integrate_path(curve, leg, curve.y(O), order=self.order)
        else:
            res = integrate_path(curve, leg, y_end=np.sqrt(complex(curve.f(p))), order=self.order)
        loop = integrate_path(curve, circle_path(curve, 0j, R, theta), res.y_end, order=self.order)
        return (res.values + 0.5 * loop.values)[self._columns]

    def raw(self, P: CurvePoint) -> np.ndarray:
        """Unreduced ``u_O(P)`` along the planned route."""
        P = P if P.is_infinity else self.curve.canonical(P)
        if P not in self._cache:
            if P == self.base:
                self._cache[P] = np.zeros(self.curve.genus, dtype=complex)
            elif P.is_infinity:
                self._cache[P] = self._to_infinity()
            else:
                self._cache[P] = self._to_point(P)
        return self._cache[P]

    def point(self, P: CurvePoint) -> JacobianPoint:
        return jacobian_point(self.lattice, self.raw(P))

    def divisor(self, D: Divisor, check_degree: bool = True) -> JacobianPoint:
        if check_degree and D.degree != 0:
            raise NonzeroDegree(f"divisor has degree {D.degree}")
        total = np.zeros(self.curve.genus, dtype=complex)
        for P, m in D:
            total += m * self.raw(P)
        return jacobian_point(self.lattice, total)


def abel_point(curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
               O: CurvePoint, P: CurvePoint, path: XPath | None = None, **kw) -> JacobianPoint:
    """``u_O(P)``; a custom ``path`` from ``O.x`` to ``P.x`` may be supplied."""
    amap = AbelMap(curve, periods, lattice, O, **kw)
    if path is None:
        return amap.point(P)
    if P.kind == "finite" and O.kind == "finite":
        y_end = continue_y(curve, path, curve.y(amap.base))
        if curve.sheet_of(P.x, y_end) != P.sheet:
            raise InputError("the supplied path does not end on the requested sheet")
    return jacobian_point(lattice, amap.integrate(path, amap.base, P))


def abel_divisor(curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
                 O: CurvePoint, D: Divisor, **kw) -> JacobianPoint:
    return AbelMap(curve, periods, lattice, O, **kw).divisor(D)


def default_base(curve: HyperellipticCurve) -> CurvePoint:
    return branch_point(curve.roots[0])


def check_principal(curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
                    h: RationalFunctionSpec, tol: float = MEMBERSHIP_TOL,
                    O: CurvePoint | None = None) -> dict:
    """Abel forward check: ``u(div h)`` must vanish modulo the lattice."""
    D = divisor_of_function(curve, h)
    u = abel_divisor(curve, periods, lattice, O or default_base(curve), D)
    dist = u.distance_to_zero
    return {"distance": dist, "pass": bool(dist < tol)}


def base_point_shift(curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
                     O: CurvePoint, O2: CurvePoint, D: Divisor, check_degree: bool = True) -> dict:
    """Compare ``u_O(D)`` and ``u_O2(D)``, each computed from its own base point.

    ``check_degree=False`` lets tests evaluate the shift on a divisor of
    nonzero degree, where it equals ``-deg(D) * int_O^O2 omega``.
    """
    if check_degree and D.degree != 0:
        raise NonzeroDegree(f"divisor has degree {D.degree}")
    u1 = AbelMap(curve, periods, lattice, O).divisor(D, check_degree)
    u2 = AbelMap(curve, periods, lattice, O2).divisor(D, check_degree)
    diff = u2.value - u1.value
    return {"difference": diff, "difference_distance": lattice_distance(lattice, diff)}


# ---------------------------------------------------------------- d log periods

@dataclass(frozen=True)
class DlogPeriods:
    values: np.ndarray
    integers: np.ndarray
    defect: float


def dlog_periods(curve: HyperellipticCurve, cycles: SymplecticBasis, h: RationalFunctionSpec,
                 min_distance: float | None = None) -> DlogPeriods:
    """``oint d log h / (2 pi i)`` over each basis cycle.

    ``d log (x - c) = dx / (x - c)`` and ``d log y = f'/(2f) dx``, so only
    rational integrands occur.
    """
    if min_distance is None:
        min_distance = 1e-6 * curve.scale
    poles: dict[complex, complex] = {}
    for fac, m in h.factors:
        if isinstance(fac, Linear):
            poles[fac.c] = poles.get(fac.c, 0) + m
        elif isinstance(fac, YCoord):
            for e in curve.roots:
                poles[complex(e)] = poles.get(complex(e), 0) + 0.5 * m
    cs = np.array(list(poles.keys()), dtype=complex)
    ms = np.array(list(poles.values()), dtype=complex)
    raw = np.zeros(len(cycles.raw_cycles), dtype=complex)
    if len(cs):
        def func(x):
            x = np.asarray(x)[..., None]
            return np.sum(ms / (x - cs), axis=-1)

        for k, cyc in enumerate(cycles.raw_cycles):
            for c in cs:
                if min(p.distance_to(c) for p in cyc.path.pieces) < min_distance:
                    raise PoleOnPath(f"pole of d log h at {c} lies on cycle {k}")
            raw[k] = integrate_rational(cyc.path, func)
    vals = cycles.transform @ raw / (2j * math.pi)
    ints = np.rint(vals.real).astype(int)
    defect = float(np.max(np.abs(vals - ints))) if len(vals) else 0.0
    return DlogPeriods(vals, ints, defect)


# ---------------------------------------------------------------- Jacobi inversion

@dataclass
class InversionState:
    z: np.ndarray
    F_value: np.ndarray
    jacobian: np.ndarray
    step_norm: float = 0.0
    residual: float = math.inf


@dataclass(frozen=True)
class InversionResult:
    points: tuple[CurvePoint, ...]
    z: np.ndarray
    residual: float
    iterations: int
    history: tuple[float, ...]


class LocalCharts:
    """Disks around base points ``P_j`` and the map ``F(z) = sum_j int_{P_j}^{z_j} omega``."""

    def __init__(self, curve: HyperellipticCurve, periods: PeriodMatrices,
                 base: tuple[CurvePoint, ...], order: int = DEFAULT_ORDER):
        if len(base) != curve.genus:
            raise DimensionMismatch(f"need {curve.genus} base points, got {len(base)}")
        for P in base:
            if P.kind != "finite":
                raise InputError("inversion base points must be finite non-branch points")
        self.curve = curve
        self.base = tuple(base)
        self.order = order
        self.exponents = np.array(periods.forms.exponents)
        self.centers = np.array([P.x for P in base])
        self.y0 = np.array([curve.y(P) for P in base])
        self.radii = np.array([CHART_FRACTION * float(np.min(np.abs(curve.roots - c)))
                               for c in self.centers])

    def inside(self, z) -> bool:
        return bool(np.all(np.abs(np.asarray(z) - self.centers) < self.radii))

    def lift(self, j: int, zj: complex) -> tuple[np.ndarray, complex]:
        """Integrals from ``P_j`` to ``zj`` on the straight chart segment, and y at ``zj``."""
        c = self.centers[j]
        if zj == c:
            return np.zeros(self.curve.genus, dtype=complex), self.y0[j]
        path = path_from_pieces(self.curve, [Segment(c, complex(zj))])
        res = integrate_path(self.curve, path, self.y0[j], order=self.order)
        return res.values[self.exponents], res.y_end

    def F(self, z) -> tuple[np.ndarray, np.ndarray]:
        total = np.zeros(self.curve.genus, dtype=complex)
        ys = np.empty(len(z), dtype=complex)
        for j, zj in enumerate(z):
            v, ys[j] = self.lift(j, zj)
            total += v
        return total, ys

    def jacobian(self, z, ys) -> np.ndarray:
        """``phi[i, j] = omega_i(z_j)`` in the x chart."""
        z = np.asarray(z)
        return (z[None, :] ** self.exponents[:, None]) / np.asarray(ys)[None, :]

    def points(self, z, ys) -> tuple[CurvePoint, ...]:
        return tuple(finite_point(zj, self.curve.sheet_of(zj, yj)) for zj, yj in zip(z, ys))


def jacobi_invert_local(curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
                        base: tuple[CurvePoint, ...], xi, max_iter: int = MAX_NEWTON_ITER,
                        tol: float = NEWTON_TOL, order: int = DEFAULT_ORDER) -> InversionResult:
    """Solve ``F(z) = xi`` near the base tuple by damped Newton.

    Raises
    ------
    SingularJacobianAtBase
        if ``(phi_ij)`` at the base tuple has condition number above ``1e6``.
    LeftChart
        if every damped step would leave a chart disk.
    NoConvergence
        if the residual stalls or ``max_iter`` is exhausted.
    """
    charts = LocalCharts(curve, periods, base, order)
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != curve.genus:
        raise DimensionMismatch(f"target has dimension {xi.shape[0]}, genus is {curve.genus}")
    z = charts.centers.astype(complex)
    J = charts.jacobian(z, charts.y0)
    cond = float(np.linalg.cond(J))
    if not np.isfinite(cond) or cond > BASE_CONDITION_MAX:
        raise SingularJacobianAtBase(f"base Jacobian condition number {cond:.3g}")
    Fz = np.zeros(curve.genus, dtype=complex)
    ys = charts.y0.copy()
    res = float(np.linalg.norm(Fz - xi))
    history = [res]
    it = 0
    # polish well below ``tol`` while steps still help; a stall is fine once below it
    while res >= POLISH * tol:
        if it >= max_iter:
            if res < tol:
                break
            raise NoConvergence(f"residual {res:.3g} after {it} Newton steps")
        step = np.linalg.solve(J, xi - Fz)
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = z + lam * step
            if charts.inside(trial):
                F_t, ys_t = charts.F(trial)
                r_t = float(np.linalg.norm(F_t - xi))
                if r_t < res:
                    break
            lam *= 0.5
        else:
            if res < tol:
                break
            if not charts.inside(z + lam * 2 * step):
                raise LeftChart("Newton step leaves the chart disks; shrink the target")
            raise NoConvergence(f"damped Newton stalled at residual {res:.3g}")
        z, Fz, ys, res = trial, F_t, ys_t, r_t
        J = charts.jacobian(z, ys)
        history.append(res)
        it += 1
    return InversionResult(charts.points(z, ys), z, res, it, tuple(history))


def inversion_divisor(base: tuple[CurvePoint, ...], points: tuple[CurvePoint, ...]) -> Divisor:
    return Divisor([(Q, 1) for Q in points] + [(P, -1) for P in base])


def finite_difference_jacobian(charts: LocalCharts, h: float = 1e-5) -> np.ndarray:
    """Central differences of ``F`` at the base tuple."""
    g = len(charts.centers)
    out = np.zeros((g, g), dtype=complex)
    for j in range(g):
        zp = charts.centers.astype(complex)
        zm = zp.copy()
        zp[j] += h
        zm[j] -= h
        out[:, j] = (charts.F(zp)[0] - charts.F(zm)[0]) / (2 * h)
    return out


def sample_finite_point(curve: HyperellipticCurve, rng: np.random.Generator,
                        radius: float | None = None, min_gap: float = 0.1) -> CurvePoint:
    """A random finite point at distance at least ``min_gap * margin`` from every branch point."""
    if radius is None:
        radius = 1.5 * max(1.0, float(np.max(np.abs(curve.roots))))
    gap = min_gap * curve.discriminant_margin
    while True:
        x = radius * math.sqrt(rng.random()) * np.exp(2j * math.pi * rng.random())
        if np.min(np.abs(curve.roots - x)) > gap:
            return finite_point(complex(x), 1 if rng.random() < 0.5 else -1)


def chart_capacity(curve: HyperellipticCurve, base: tuple[CurvePoint, ...]) -> float:
    """Radius of the target ball whose first Newton step stays inside every chart disk.

    The step for a target ``xi`` is ``phi^-1 xi``; its ``j``-th entry is at
    most ``|row_j(phi^-1)| |xi|``, which must stay below the chart radius.
    """
    phi = np.array([differential_vector(curve, P) for P in base]).T
    inv = np.linalg.inv(phi)
    radii = np.array([CHART_FRACTION * float(np.min(np.abs(curve.roots - P.x))) for P in base])
    return float(np.min(radii / np.linalg.norm(inv, axis=1)))


def choose_base_tuple(curve: HyperellipticCurve, rng: np.random.Generator,
                      draws: int = BASE_DRAWS) -> tuple[CurvePoint, ...]:
    """Best of ``draws`` random tuples by :func:`chart_capacity`.

    Tuples whose Jacobian has condition number above ``1e6`` are discarded.
    """
    g = curve.genus
    best, best_cap = None, -1.0
    for _ in range(draws):
        pts = tuple(sample_finite_point(curve, rng, min_gap=0.5) for _ in range(g))
        xs = np.array([P.x for P in pts])
        gaps = np.abs(xs[:, None] - xs[None, :])
        np.fill_diagonal(gaps, np.inf)
        if np.min(gaps) < 1e-3:
            continue
        phi = np.array([differential_vector(curve, P) for P in pts]).T
        if not np.linalg.cond(phi) < BASE_CONDITION_MAX:
            continue
        cap = chart_capacity(curve, pts)
        if cap > best_cap:
            best, best_cap = pts, cap
    if best is None:
        raise SingularJacobianAtBase(f"no well-conditioned base tuple in {draws} draws")
    return best


# ---------------------------------------------------------------- embedding

def embedding_spot_check(curve: HyperellipticCurve, periods: PeriodMatrices, lattice: PeriodLattice,
                         O: CurvePoint, sample_size: int, rng: np.random.Generator,
                         tol: float = 1e-4, phi_tol: float = 1e-10) -> dict:
    """Sampled injectivity of ``u_O`` and non-vanishing of the differential vector."""
    amap = AbelMap(curve, periods, lattice, O)
    dists, phis = [], []
    while len(dists) < sample_size:
        P = sample_finite_point(curve, rng)
        Q = sample_finite_point(curve, rng)
        if P == Q:
            continue
        dists.append(lattice_distance(lattice, amap.raw(P) - amap.raw(Q)))
        phis += [float(np.max(np.abs(differential_vector(curve, X)))) for X in (P, Q)]
    for e in curve.roots:
        phis.append(float(np.max(np.abs(differential_vector(curve, branch_point(e))))))
    min_d = min(dists) if dists else math.inf
    min_phi = min(phis) if phis else math.inf
    return {
        "pairs": len(dists),
        "min_pair_distance": min_d,
        "min_max_phi": min_phi,
        "injective_pass": bool(min_d > tol),
        "immersion_pass": bool(min_phi > phi_tol),
        "pass": bool(min_d > tol and min_phi > phi_tol),
    }


def random_principal_function(curve: HyperellipticCurve, rng: np.random.Generator,
                              max_factors: int = 3) -> RationalFunctionSpec:
    """A random product of ``(x - c)**(+-1)`` and ``y**(+-1)`` factors."""
    n = int(rng.integers(1, max_factors + 1))
    facs = []
    for _ in range(n):
        m = 1 if rng.random() < 0.5 else -1
        if rng.random() < 0.3:
            facs.append((YCoord(), m))
        else:
            c = sample_finite_point(curve, rng).x
            facs.append((Linear(c), m))
    return RationalFunctionSpec(tuple(facs))


def generic_pair_divisor(curve: HyperellipticCurve, rng: np.random.Generator) -> Divisor:
    P = sample_finite_point(curve, rng)
    Q = sample_finite_point(curve, rng)
    return Divisor([(P, 1), (Q, -1)])


def fiber_divisor(curve: HyperellipticCurve, rng: np.random.Generator) -> Divisor:
    """``P + sigma(P) - 2 inf`` for a random finite ``P``."""
    P = sample_finite_point(curve, rng)
    return Divisor([(P, 1), (involution(P), 1), (INFINITY, -2)])


__all__ = [
    "AbelMap", "JacobianPoint", "InversionResult", "InversionState", "LocalCharts", "DlogPeriods",
    "abel_point", "abel_divisor", "check_principal", "base_point_shift", "dlog_periods",
    "jacobi_invert_local", "choose_base_tuple", "embedding_spot_check", "finite_difference_jacobian",
    "inversion_divisor", "random_principal_function", "generic_pair_divisor", "fiber_divisor",
    "sample_finite_point", "default_base", "jacobian_point",
]
