"""Hyperelliptic curves y^2 = f(x) with deg f = 2g + 1, their points and divisors.

Only the odd-degree model is supported: there is a single point over
``x = infinity`` and it is a ramification point.

Sheet convention
----------------
A finite non-branch point is labelled by ``sheet = +1`` when its
y-coordinate equals the principal square root of ``f(x)`` and by
``sheet = -1`` otherwise.  Local charts are

* ``x`` itself at finite non-branch points,
* ``t`` with ``x = e + t**2`` at a branch point ``e``,
* ``t`` with ``x = t**-2`` at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegreeTooSmall,
    EvenDegree,
    InputError,
    LeadingZero,
    NearDegenerate,
    NotOnCurve,
)

DEFAULT_DEGENERACY_THRESHOLD = 1e-8

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CurvePoint:
    """A point of the curve.

    ``kind`` is one of ``"finite"``, ``"branch"`` or ``"infinity"``.  Only
    finite non-branch points carry a sheet (+1 or -1); branch points and
    infinity use ``sheet = 0``.
    """

    kind: str
    x: complex = 0j
    sheet: int = 0

    def __post_init__(self):
        if self.kind == "finite":
            if self.sheet not in (1, -1):
                raise InputError(f"finite point needs sheet +1 or -1, got {self.sheet!r}")
        elif self.kind in ("branch", "infinity"):
            if self.sheet != 0:
                raise InputError(f"{self.kind} point carries no sheet")
        else:
            raise InputError(f"unknown point kind {self.kind!r}")
        object.__setattr__(self, "x", complex(self.x) if self.kind != "infinity" else 0j)

    @property
    def is_branch(self) -> bool:
        return self.kind == "branch"

    @property
    def is_infinity(self) -> bool:
        return self.kind == "infinity"

    def sort_key(self):
        order = {"finite": 0, "branch": 1, "infinity": 2}[self.kind]
        return (order, self.x.real, self.x.imag, self.sheet)

    def __repr__(self):
        if self.kind == "infinity":
            return "CurvePoint(inf)"
        if self.kind == "branch":
            return f"CurvePoint(branch {self.x})"
        return f"CurvePoint({self.x}, {'+' if self.sheet > 0 else '-'})"


INFINITY = CurvePoint("infinity")


def finite_point(x: complex, sheet: int = 1) -> CurvePoint:
    return CurvePoint("finite", complex(x), int(sheet))


def branch_point(x: complex) -> CurvePoint:
    return CurvePoint("branch", complex(x))


def involution(P: CurvePoint) -> CurvePoint:
    """Hyperelliptic involution (x, y) -> (x, -y)."""
    if P.kind != "finite":
        return P
    return CurvePoint("finite", P.x, -P.sheet)


def _polish_root(coeffs_desc: np.ndarray, deriv_desc: np.ndarray, r: complex) -> complex:
    for _ in range(50):
        fr = np.polyval(coeffs_desc, r)
        dfr = np.polyval(deriv_desc, r)
        if dfr == 0:
            break
        step = fr / dfr
        r_new = r - step
        if abs(step) <= 4 * _EPS * max(1.0, abs(r_new)):
            return r_new
        # reject steps that make the residual worse
        if abs(np.polyval(coeffs_desc, r_new)) > abs(fr):
            break
        r = r_new
    return r


@dataclass(frozen=True)
class HyperellipticCurve:
    """The curve ``y**2 = sum(coeffs[k] * x**k)``.

    Build instances with :func:`new_curve`, which validates the polynomial
    and computes the branch points.
    """

    coeffs: tuple[complex, ...]
    branch_points: tuple[complex, ...]
    discriminant_margin: float
    degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD
    _roots: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def roots(self) -> np.ndarray:
        """Branch points as a read-only complex array."""
        return self._roots

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self._roots))))

    def f(self, x):
        return np.polyval(np.asarray(self.coeffs[::-1]), x)

    def df(self, x):
        c = np.asarray(self.coeffs[::-1])
        return np.polyval(np.polyder(c), x)

    def branch_index(self, x: complex, tol: float | None = None) -> int | None:
        """Index of the branch point within ``tol`` of ``x`` (or ``None``)."""
        if tol is None:
            tol = 1e-10 * self.scale
        d = np.abs(self._roots - x)
        i = int(np.argmin(d))
        return i if d[i] <= tol else None

    def y(self, P: CurvePoint) -> complex:
        """The y-coordinate of a finite point (0 at branch points)."""
        if P.kind == "infinity":
            raise NotOnCurve("y is infinite at the point at infinity")
        if P.kind == "branch":
            return 0j
        return P.sheet * np.sqrt(complex(self.f(P.x)))

    def sheet_of(self, x: complex, y: complex) -> int:
        """Label a (x, y) pair with the sheet convention; raises if off the curve."""
        s = np.sqrt(complex(self.f(x)))
        if abs(y * y - s * s) > 1e-8 * max(1.0, abs(s * s)):
            raise NotOnCurve(f"({x}, {y}) is not on the curve")
        return 1 if abs(y - s) <= abs(y + s) else -1

    def point(self, x: complex, sheet: int = 1) -> CurvePoint:
        """Finite point over ``x``; returns the branch point if ``x`` is one."""
        i = self.branch_index(x)
        if i is not None:
            return branch_point(self._roots[i])
        return finite_point(x, sheet)

    def check_point(self, P: CurvePoint) -> None:
        if P.kind == "branch" and self.branch_index(P.x, 1e-8 * self.scale) is None:
            raise NotOnCurve(f"{P.x} is not a branch point")
        if P.kind == "finite" and self.branch_index(P.x) is not None:
            raise NotOnCurve(f"{P.x} is a branch point; use kind='branch'")

    def canonical(self, P: CurvePoint) -> CurvePoint:
        """Snap branch points to the stored root values."""
        if P.kind == "branch":
            i = self.branch_index(P.x, 1e-8 * self.scale)
            if i is None:
                raise NotOnCurve(f"{P.x} is not a branch point")
            return branch_point(self._roots[i])
        self.check_point(P)
        return P


def new_curve(coeffs: Sequence[complex],
              degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD) -> HyperellipticCurve:
    """Validate ``coeffs`` (ascending powers) and build the curve.

    Raises
    ------
    LeadingZero, EvenDegree, DegreeTooSmall, NearDegenerate
    """
    if len(coeffs) == 0:
        raise InputError("empty coefficient list")
    c = [complex(v) for v in coeffs]
    if c[-1] == 0:
        raise LeadingZero("leading coefficient is zero; strip trailing zeros")
    n = len(c) - 1
    if n % 2 == 0:
        raise EvenDegree(f"degree {n} is even; only odd-degree models are supported")
    if n < 3:
        raise DegreeTooSmall(f"degree {n} gives genus < 1")

    desc = np.array(c[::-1])
    deriv = np.polyder(desc)
    raw = np.roots(desc)
    roots = np.array([_polish_root(desc, deriv, r) for r in raw])

    # rounding-level error estimate of each root: eps * sum|c_k||r|^k / |f'(r)|
    absdesc = np.abs(desc)
    err = np.empty(n)
    for i, r in enumerate(roots):
        d = abs(np.polyval(deriv, r))
        noise = n * _EPS * np.polyval(absdesc, abs(r))
        err[i] = np.inf if d == 0 else noise / d

    scale = max(1.0, float(np.max(np.abs(roots))))
    margin = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            dij = abs(roots[i] - roots[j])
            margin = min(margin, dij)
            if dij <= degeneracy_threshold * scale or dij <= 10 * (err[i] + err[j]):
                raise NearDegenerate(
                    f"branch points {roots[i]:.6g} and {roots[j]:.6g} are not separated "
                    f"(distance {dij:.3g})")

    order = sorted(range(n), key=lambda i: (roots[i].real, roots[i].imag))
    roots = roots[order]
    roots.setflags(write=False)
    return HyperellipticCurve(
        coeffs=tuple(c),
        branch_points=tuple(complex(r) for r in roots),
        discriminant_margin=float(margin),
        degeneracy_threshold=degeneracy_threshold,
        _roots=roots,
    )


def curve_from_roots(roots: Iterable[complex], leading: complex = 1.0,
                     degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD) -> HyperellipticCurve:
    """Convenience constructor from branch points."""
    desc = leading * np.poly(np.asarray(list(roots), dtype=complex))
    return new_curve(list(desc[::-1]), degeneracy_threshold)


def genus(curve: HyperellipticCurve) -> int:
    return curve.genus


# ---------------------------------------------------------------- differentials

@dataclass(frozen=True)
class DifferentialBasis:
    """The forms ``x**(k-1) dx / y`` for ``k = 1..g``.

    ``order`` optionally permutes the elements: element ``j`` is then
    ``x**order[j] dx / y``.
    """

    curve: HyperellipticCurve
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.order is not None and sorted(self.order) != list(range(self.curve.genus)):
            raise InputError("order must be a permutation of 0..g-1")

    @property
    def size(self) -> int:
        return self.curve.genus

    @property
    def exponents(self) -> tuple[int, ...]:
        return self.order if self.order is not None else tuple(range(self.size))

    def __len__(self):
        return self.size

    def labels(self) -> list[str]:
        out = []
        for p in self.exponents:
            out.append("dx/y" if p == 0 else ("x dx/y" if p == 1 else f"x^{p} dx/y"))
        return out


def holomorphic_basis(curve: HyperellipticCurve) -> DifferentialBasis:
    return DifferentialBasis(curve)


def differential_vector(curve: HyperellipticCurve, P: CurvePoint) -> np.ndarray:
    """Values of all g basis forms at ``P`` in the local chart at ``P``."""
    g = curve.genus
    if P.kind == "infinity":
        # omega_k = -2 t^(2g-2k) dt / sqrt(h(t)), h(0) = leading coefficient
        out = np.zeros(g, dtype=complex)
        out[g - 1] = -2.0 / np.sqrt(curve.leading)
        return out
    P = curve.canonical(P)
    powers = P.x ** np.arange(g)
    if P.kind == "branch":
        ge = complex(curve.df(P.x))
        return 2.0 * powers / np.sqrt(ge)
    return powers / curve.y(P)


def evaluate_differential(curve: HyperellipticCurve, k: int, P: CurvePoint) -> complex:
    """Chart value of ``omega_k`` (1-based, ``1 <= k <= g``) at ``P``."""
    if not 1 <= k <= curve.genus:
        raise InputError(f"basis index {k} outside 1..{curve.genus}")
    return complex(differential_vector(curve, P)[k - 1])


# ---------------------------------------------------------------- functions and divisors

@dataclass(frozen=True)
class Linear:
    """The function ``x - c``."""

    c: complex


@dataclass(frozen=True)
class YCoord:
    """The function ``y``."""


@dataclass(frozen=True)
class RationalFunctionSpec:
    """A product of powers of ``x - c`` and ``y``.

    An empty product is the constant function 1.
    """

    factors: tuple[tuple[Linear | YCoord, int], ...] = ()

    def __post_init__(self):
        for fac, m in self.factors:
            if not isinstance(fac, (Linear, YCoord)):
                raise InputError(f"unsupported factor {fac!r}")
            if int(m) != m or m == 0:
                raise InputError("factor exponents must be nonzero integers")

    def __mul__(self, other: "RationalFunctionSpec") -> "RationalFunctionSpec":
        return RationalFunctionSpec(self.factors + other.factors)

    def __pow__(self, m: int) -> "RationalFunctionSpec":
        return RationalFunctionSpec(tuple((fac, e * m) for fac, e in self.factors))

    def __truediv__(self, other: "RationalFunctionSpec") -> "RationalFunctionSpec":
        return self * other ** -1

    @property
    def kind(self) -> str:
        if len(self.factors) == 1 and self.factors[0][1] == 1:
            return "linear" if isinstance(self.factors[0][0], Linear) else "ycoord"
        return "product"


def linear(c: complex) -> RationalFunctionSpec:
    return RationalFunctionSpec(((Linear(complex(c)), 1),))


def ycoord() -> RationalFunctionSpec:
    return RationalFunctionSpec(((YCoord(), 1),))


class Divisor:
    """Formal integer combination of curve points.

    Entries are merged on construction, zero multiplicities dropped and the
    result kept in a deterministic order.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[CurvePoint, int]] = ()):
        acc: dict[CurvePoint, int] = {}
        for P, m in entries:
            if int(m) != m:
                raise InputError("divisor multiplicities must be integers")
            acc[P] = acc.get(P, 0) + int(m)
        self._entries = tuple(sorted(((P, m) for P, m in acc.items() if m != 0),
                                     key=lambda e: e[0].sort_key()))

    @property
    def entries(self) -> tuple[tuple[CurvePoint, int], ...]:
        return self._entries

    @property
    def degree(self) -> int:
        return sum(m for _, m in self._entries)

    def multiplicity(self, P: CurvePoint) -> int:
        for Q, m in self._entries:
            if Q == P:
                return m
        return 0

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self._entries + other._entries)

    def __neg__(self) -> "Divisor":
        return Divisor((P, -m) for P, m in self._entries)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, k: int) -> "Divisor":
        return Divisor((P, k * m) for P, m in self._entries)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self):
        if not self._entries:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{m}*{P!r}" for P, m in self._entries) + ")"


def point_divisor(P: CurvePoint, m: int = 1) -> Divisor:
    return Divisor([(P, m)])


def divisor_of_function(curve: HyperellipticCurve, h: RationalFunctionSpec) -> Divisor:
    """Zeros minus poles of ``h``, including the point at infinity."""
    g = curve.genus
    entries: list[tuple[CurvePoint, int]] = []
    for fac, m in h.factors:
        if isinstance(fac, YCoord):
            entries += [(branch_point(e), m) for e in curve.roots]
            entries.append((INFINITY, -(2 * g + 1) * m))
            continue
        i = curve.branch_index(fac.c)
        if i is not None:
            entries.append((branch_point(curve.roots[i]), 2 * m))
        else:
            entries += [(finite_point(fac.c, 1), m), (finite_point(fac.c, -1), m)]
        entries.append((INFINITY, -2 * m))
    return Divisor(entries)


def random_curve(genus: int, rng: np.random.Generator, min_separation: float = 0.15,
                 radius: float = 1.0) -> HyperellipticCurve:
    """Monic curve with ``2g + 1`` roots drawn uniformly in a disk, pairwise separated."""
    n = 2 * genus + 1
    roots: list[complex] = []
    while len(roots) < n:
        z = radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        if all(abs(z - w) >= min_separation for w in roots):
            roots.append(complex(z))
    return curve_from_roots(roots)
