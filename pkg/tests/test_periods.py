import numpy as np
import pytest
from conftest import named_curve, pipeline

from abeljacobi import period_matrices, random_curve, riemann_matrix, verify_riemann_relations
from abeljacobi.curve import DifferentialBasis
from abeljacobi.errors import SingularA
from abeljacobi.homology import SymplecticBasis
from abeljacobi.periods import relations_report


def test_riemann_matrix_identity_case():
    rm = riemann_matrix(np.eye(2), 1j * np.eye(2))
    assert np.allclose(rm.Omega, 1j * np.eye(2))
    assert rm.symmetry_defect == 0 and rm.min_eig_im == pytest.approx(1) and rm.cholesky_ok


def test_zero_A_is_singular():
    with pytest.raises(SingularA):
        riemann_matrix(np.zeros((2, 2)), np.eye(2))


@pytest.mark.parametrize("name", ["x^3-x", "x^5-1", "x^7-1", "x^9+x"])
def test_named_curves_pass(name):
    rep = verify_riemann_relations(named_curve(name))
    assert rep["pass"] and rep["symmetry_defect"] < 1e-8 and rep["min_eig_im"] > 0


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_shapes(g):
    P = period_matrices(random_curve(g, np.random.default_rng(g)))
    assert P.A.shape == P.B.shape == (g, g)
    assert np.all(P.errors < 1e-9)


def test_quintic_doubled_order_agrees():
    c = named_curve("x^5-1")
    P32 = period_matrices(c, order=32)
    P64 = period_matrices(c, order=64)
    assert np.max(np.abs(P32.A - P64.A)) < 1e-10
    assert np.max(np.abs(P32.B - P64.B)) < 1e-10
    rm = riemann_matrix(P64.A, P64.B)
    assert rm.symmetry_defect < 1e-8 and rm.min_eig_im > 0


def test_linearity_in_cycles():
    c, P, _ = pipeline("x^5-1")
    T = P.basis.transform.copy()
    T[0] += T[2]  # a_1 -> a_1 + b_1
    Q = period_matrices(c, basis=SymplecticBasis(P.basis.raw_cycles, P.basis.intersection, T))
    assert np.allclose(Q.A[0], P.A[0] + P.B[0], atol=1e-13)
    assert np.allclose(Q.B, P.B, atol=1e-13)


def test_basis_order_conjugates_columns():
    c, P, _ = pipeline("x^7-1")
    perm = (2, 0, 1)
    Q = period_matrices(c, forms=DifferentialBasis(c, perm), basis=P.basis)
    assert np.allclose(Q.A, P.A[:, list(perm)]) and np.allclose(Q.B, P.B[:, list(perm)])
    assert relations_report(Q)["pass"] == relations_report(P)["pass"]
    assert np.allclose(riemann_matrix(Q.A, Q.B).Omega, riemann_matrix(P.A, P.B).Omega, atol=1e-12)


def test_positivity_on_random_vectors():
    _, P, _ = pipeline("x^9+x")
    Om = riemann_matrix(P.A, P.B).Omega
    rng = np.random.default_rng(5)
    for _ in range(50):
        v = rng.standard_normal(4)
        assert v @ Om.imag @ v > 0


def test_rank_margin():
    _, P, _ = pipeline("x^5-3x+1+i")
    assert relations_report(P)["rank_2g_margin"] > 1e-8
