import cmath
import math

import numpy as np
import pytest
from conftest import ORACLES, named_curve, pipeline

from abeljacobi import curve_from_roots, period_lattice, period_matrices
from abeljacobi.elliptic import (
    AGM_MAX_ITER,
    agm,
    elliptic_periods_agm,
    lattice_equivalent,
    random_unimodular,
)
from abeljacobi.errors import DimensionMismatch, WrongGenus, ZeroInput
from abeljacobi.lattice import lattice_from_generators


def test_agm_fixed_point_and_symmetry():
    a = 3 + 4j
    assert agm(a, a) == a
    assert abs(agm(1, 2 + 1j) - agm(2 + 1j, 1)) < 1e-14 * abs(agm(1, 2 + 1j))


def test_agm_lemniscate():
    assert math.pi / agm(1, math.sqrt(2)).real == pytest.approx(ORACLES["lemniscate"], rel=1e-14)


def test_agm_zero_input():
    with pytest.raises(ZeroInput):
        agm(0, 1)


def test_agm_iteration_count():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        _, steps = agm(a, b, return_steps=True)
        assert steps <= AGM_MAX_ITER


def test_square_curve_tau_is_i():
    E = elliptic_periods_agm(named_curve("x^3-x"))
    assert E.tau.imag > 0
    L = lattice_from_generators([[1], [1j]])
    M = lattice_from_generators([[1], [E.tau]])
    assert lattice_equivalent(L, M, 1e-12)


def test_hexagonal_curve_tau():
    E = elliptic_periods_agm(named_curve("x^3-1"))
    rho = cmath.exp(1j * math.pi / 3)
    L = lattice_from_generators([[1], [rho]])
    assert lattice_equivalent(L, lattice_from_generators([[1], [E.tau]]), 1e-12)


@pytest.mark.parametrize("name", ["x^3-x", "x^3-1"])
def test_agm_matches_quadrature_oracle(name):
    # the normalisation constant is validated here against independent quadrature
    E = elliptic_periods_agm(named_curve(name))
    gens = np.array(ORACLES["lattices"][name]) @ np.array([1, 1j])
    M = lattice_from_generators(gens)
    assert lattice_equivalent(E.lattice, M, 1e-12 * M.shortest_generator)


def test_agm_matches_pipeline_on_random_cubics():
    rng = np.random.default_rng(11)
    for _ in range(20):
        roots = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        lead = rng.standard_normal() + 1j * rng.standard_normal()
        c = curve_from_roots(roots, lead)
        L = period_lattice(period_matrices(c))
        assert lattice_equivalent(L, elliptic_periods_agm(c).lattice, 1e-9 * L.shortest_generator)


def test_wrong_genus():
    with pytest.raises(WrongGenus):
        elliptic_periods_agm(named_curve("x^5-1"))


def test_lattice_equivalence_examples():
    _, _, L = pipeline("x^5-1")
    assert lattice_equivalent(L, L, 1e-12)
    assert not lattice_equivalent(L, lattice_from_generators(2 * L.generators), 1e-6)
    U = random_unimodular(4, np.random.default_rng(1))
    assert abs(round(np.linalg.det(U))) == 1
    assert lattice_equivalent(L, lattice_from_generators(U @ L.generators), 1e-9)
    _, _, L1 = pipeline("x^3-x")
    with pytest.raises(DimensionMismatch):
        lattice_equivalent(L, L1, 1e-9)
