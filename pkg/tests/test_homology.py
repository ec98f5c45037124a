import numpy as np
import pytest
from conftest import named_curve
from hypothesis import given
from hypothesis import strategies as st

from abeljacobi import random_curve, symplectic_basis
from abeljacobi.errors import NotUnimodular
from abeljacobi.homology import (
    build_cycles,
    integer_det,
    intersection_matrix,
    lifted_polyline,
    standard_form,
    symplectic_normalize,
)
from abeljacobi.paths import continue_y, enclosed_branch_parity


def _brute_force_crossings(curve, A, B):
    """Pure-Python segment intersection count with the same-sheet rule."""
    xa, ya = A
    xb, yb = B
    total = 0
    for i in range(len(xa) - 1):
        p, r = xa[i], xa[i + 1] - xa[i]
        for j in range(len(xb) - 1):
            q, s = xb[j], xb[j + 1] - xb[j]
            den = (r.conjugate() * s).imag
            if den == 0:
                continue
            w = q - p
            t = (w.conjugate() * s).imag / den
            u = (w.conjugate() * r).imag / den
            if 0 <= t < 1 and 0 <= u < 1:
                x = p + t * r
                fa = np.prod(np.sqrt((x - curve.roots) / (xa[i] - curve.roots)))
                fb = np.prod(np.sqrt((x - curve.roots) / (xb[j] - curve.roots)))
                y1, y2 = ya[i] * fa, yb[j] * fb
                if abs(y1 - y2) < abs(y1 + y2):
                    total += 1 if den > 0 else -1
    return total


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_cycle_count_and_closure(g):
    c = random_curve(g, np.random.default_rng(40 + g))
    cycles = build_cycles(c)
    assert len(cycles) == 2 * g
    for cyc in cycles:
        assert cyc.path.is_closed
        assert continue_y(c, cyc.path, cyc.y_start) == pytest.approx(cyc.y_start)
        assert enclosed_branch_parity(c, cyc.path)[1] == 0


def test_genus_one_intersection_matches_brute_force():
    c = named_curve("x^3-x")
    cycles = build_cycles(c)
    M = intersection_matrix(c, cycles)
    assert abs(M[0, 1]) == 1 and M[0, 0] == 0 and M[1, 1] == 0
    lifted = [lifted_polyline(c, cyc) for cyc in cycles]
    assert _brute_force_crossings(c, lifted[0], lifted[1]) == M[0, 1]


@pytest.mark.parametrize("name", ["x^5-1", "x^5-3x+1+i"])
def test_intersection_matrix_matches_brute_force(name):
    c = named_curve(name)
    cycles = build_cycles(c)
    M = intersection_matrix(c, cycles)
    lifted = [lifted_polyline(c, cyc) for cyc in cycles]
    for i in range(len(cycles)):
        for j in range(len(cycles)):
            if i != j:
                assert _brute_force_crossings(c, lifted[i], lifted[j]) == M[i, j]
    assert np.array_equal(M, -M.T)
    assert abs(integer_det(M)) == 1


def test_normalize_standard_forms():
    for g in (1, 2, 3):
        J = standard_form(g)
        assert np.array_equal(symplectic_normalize(J), np.eye(2 * g, dtype=int))
        T = symplectic_normalize(-J)
        swap = np.block([[np.zeros((g, g), int), np.eye(g, dtype=int)],
                         [np.eye(g, dtype=int), np.zeros((g, g), int)]])
        assert np.array_equal(T, swap)


def _random_unimodular(n, rng):
    M = np.eye(n, dtype=np.int64)
    for _ in range(10):
        i, j = rng.choice(n, size=2, replace=False)
        M[i] += int(rng.integers(-2, 3)) * M[j]
    return M


@given(st.integers(1, 3), st.integers(0, 10 ** 6))
def test_normalize_random_congruent_forms(g, seed):
    rng = np.random.default_rng(seed)
    T0 = _random_unimodular(2 * g, rng)
    M = T0 @ standard_form(g) @ T0.T
    T = symplectic_normalize(M)
    assert np.array_equal(T @ M @ T.T, standard_form(g))
    assert abs(integer_det(T)) == 1


def test_normalize_rejects_bad_forms():
    with pytest.raises(NotUnimodular):
        symplectic_normalize(2 * standard_form(1))
    with pytest.raises(NotUnimodular):
        symplectic_normalize(np.zeros((2, 2), int))
    with pytest.raises(NotUnimodular):
        symplectic_normalize(np.array([[0, 1], [1, 0]]))


def test_integer_det():
    assert integer_det(np.array([[2, 1], [1, 1]])) == 1
    assert integer_det(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 3]])) == -3
    assert integer_det(np.zeros((0, 0))) == 1


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_symplectic_basis_is_standard(g):
    c = random_curve(g, np.random.default_rng(50 + g))
    basis = symplectic_basis(c)
    assert np.array_equal(basis.basis_intersection(), standard_form(g))
    if g == 1:
        assert basis.basis_intersection()[0, 1] == 1


def test_symplectic_basis_deterministic():
    c = named_curve("x^7-1")
    b1, b2 = symplectic_basis(c), symplectic_basis(c)
    assert np.array_equal(b1.transform, b2.transform)
    assert b1.to_json() == b2.to_json()
