"""Period matrices over a symplectic basis and the Riemann bilinear relations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import DifferentialBasis, HyperellipticCurve, holomorphic_basis
from .errors import QuadratureNotConverged, SingularA
from .homology import SymplecticBasis, symplectic_basis
from .paths import DEFAULT_ORDER, DEFAULT_QUAD_TOL, integrate_path

SYMMETRY_TOL = 1e-8
POSITIVITY_TOL = 1e-10
RANK_TOL = 1e-8
MAX_A_CONDITION = 1e12
ERROR_TOL = 1e-9


@dataclass(frozen=True)
class PeriodMatrices:
    """``A[i, j]`` and ``B[i, j]``: integral of form ``j`` over ``a_i`` / ``b_i``.

    ``raw`` holds the integrals over the raw pair cycles; ``A`` and ``B`` are
    the integer combinations given by ``basis.transform``.
    """

    A: np.ndarray
    B: np.ndarray
    errors: np.ndarray
    raw: np.ndarray
    basis: SymplecticBasis
    forms: DifferentialBasis

    @property
    def genus(self) -> int:
        return self.A.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack([self.A, self.B])


@dataclass(frozen=True)
class RiemannMatrix:
    Omega: np.ndarray
    symmetry_defect: float
    min_eig_im: float
    cholesky_ok: bool


def raw_periods(curve: HyperellipticCurve, basis: SymplecticBasis, order: int = DEFAULT_ORDER,
                tol: float = DEFAULT_QUAD_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Integrals of all basis forms over every raw cycle, with error estimates."""
    vals, errs = [], []
    for cyc in basis.raw_cycles:
        res = integrate_path(curve, cyc.path, cyc.y_start, order=order, tol=tol)
        vals.append(res.values)
        errs.append(res.error)
    return np.array(vals), np.array(errs)


def period_matrices(curve: HyperellipticCurve, forms: DifferentialBasis | None = None,
                    basis: SymplecticBasis | None = None, order: int = DEFAULT_ORDER,
                    tol: float = DEFAULT_QUAD_TOL) -> PeriodMatrices:
    """Assemble ``A`` and ``B`` by expanding the basis cycles linearly.

    Raises
    ------
    QuadratureNotConverged
        when a summed error estimate exceeds ``ERROR_TOL``.
    SingularA
        when ``cond(A) > 1e12``; invertibility is a theorem, so this always
        points at a homology or integration bug.
    """
    if forms is None:
        forms = holomorphic_basis(curve)
    if basis is None:
        basis = symplectic_basis(curve)
    raw, raw_err = raw_periods(curve, basis, order, tol)
    raw = raw[:, list(forms.exponents)]
    g = curve.genus
    T = basis.transform
    AB = T @ raw
    err = np.abs(T) @ raw_err
    if np.max(err) > ERROR_TOL * max(1.0, float(np.max(np.abs(AB)))):
        raise QuadratureNotConverged(f"period error estimate {np.max(err):.3g} too large")
    errors = np.repeat(err[:, None], g, axis=1)
    A, B = AB[:g], AB[g:]
    _check_A(A)
    return PeriodMatrices(A, B, errors, raw, basis, forms)


def _check_A(A: np.ndarray) -> float:
    if not np.all(np.isfinite(A)) or not np.any(A):
        raise SingularA("A is zero or not finite")
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > MAX_A_CONDITION:
        raise SingularA(f"A is numerically singular (condition number {cond:.3g})")
    return cond


def riemann_matrix(A, B) -> RiemannMatrix:
    """``Omega = B A^-1`` with its symmetry defect and the spectrum of ``Im Omega``.

    With rows indexing cycles this is the normalisation ``A = I`` applied to
    ``B``; it is computed as a linear solve against ``A.T``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    _check_A(A)
    Omega = np.linalg.solve(A.T, B.T).T
    defect = float(np.max(np.abs(Omega - Omega.T)))
    im = 0.5 * (Omega.imag + Omega.imag.T)
    min_eig = float(np.min(np.linalg.eigvalsh(im)))
    try:
        np.linalg.cholesky(im)
        chol = True
    except np.linalg.LinAlgError:
        chol = False
    return RiemannMatrix(Omega, defect, min_eig, chol)


def rank_margin(A, B) -> float:
    """Smallest singular value of the real ``2g x 2g`` matrix of lattice generators."""
    gens = np.vstack([A, B])
    real = np.vstack([gens.real.T, gens.imag.T])
    return float(np.linalg.svd(real, compute_uv=False)[-1])


def relations_report(P: PeriodMatrices) -> dict:
    rm = riemann_matrix(P.A, P.B)
    cond = float(np.linalg.cond(P.A))
    im_norm = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (rm.Omega.imag + rm.Omega.imag.T)))))
    margin = rank_margin(P.A, P.B)
    ok = (rm.symmetry_defect < SYMMETRY_TOL and rm.cholesky_ok
          and rm.min_eig_im > POSITIVITY_TOL * im_norm and margin > RANK_TOL
          and cond <= MAX_A_CONDITION)
    return {
        "A_condition": cond,
        "symmetry_defect": rm.symmetry_defect,
        "min_eig_im": rm.min_eig_im,
        "cholesky_ok": rm.cholesky_ok,
        "rank_2g_margin": margin,
        "max_error_estimate": float(np.max(P.errors)),
        "pass": bool(ok),
    }


def verify_riemann_relations(curve: HyperellipticCurve, order: int = DEFAULT_ORDER) -> dict:
    """Run the full pipeline and check A invertible, Omega symmetric, Im Omega > 0, rank 2g."""
    return relations_report(period_matrices(curve, order=order))
