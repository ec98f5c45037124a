import math

import numpy as np
import pytest
from conftest import ORACLES, named_curve
from hypothesis import given
from hypothesis import strategies as st
from helpers import random_closed_path

from abeljacobi import branch_point, finite_point, random_curve
from abeljacobi.errors import (
    EndpointAtInfinity,
    InconsistentStart,
    InputError,
    NoRouteFound,
    PathNotClosed,
)
from abeljacobi.curve import INFINITY
from abeljacobi.paths import (
    Arc,
    Segment,
    circle_path,
    continue_y,
    enclosed_branch_parity,
    gauss_legendre,
    integrate,
    integrate_path,
    integrate_rational,
    lasso,
    path_from_pieces,
    plan_path,
    planned_segment,
    polygon_path,
    winding_numbers,
)


@pytest.fixture
def cubic():
    return named_curve("x^3-x")


def test_gauss_legendre_exact_on_polynomials():
    x, w = gauss_legendre(8)
    assert w.sum() == pytest.approx(1.0)
    assert np.dot(w, x ** 15) == pytest.approx(1 / 16)


def test_plan_path_same_point_is_empty(cubic):
    P = finite_point(2j, 1)
    p = plan_path(cubic, P, P)
    assert p.is_empty and p.length == 0


def test_plan_path_clear_segment(cubic):
    p = plan_path(cubic, finite_point(2 + 1j, 1), finite_point(3 + 2j, 1))
    assert len(p.pieces) == 1 and isinstance(p.pieces[0], Segment)


def test_plan_path_detours_with_clearance(cubic):
    p = plan_path(cubic, finite_point(-2, 1), finite_point(2, 1))
    assert any(isinstance(q, Arc) for q in p.pieces)
    assert p.clearance >= 0.25 * cubic.discriminant_margin - 1e-12


def test_plan_path_lands_on_requested_sheet(cubic):
    for sheet in (1, -1):
        P, Q = finite_point(0.5j, 1), finite_point(2 - 1j, sheet)
        p = plan_path(cubic, P, Q)
        y = continue_y(cubic, p, cubic.y(P))
        assert y == pytest.approx(cubic.y(Q))


def test_plan_path_errors(cubic):
    with pytest.raises(EndpointAtInfinity):
        plan_path(cubic, finite_point(2), INFINITY)
    with pytest.raises(NoRouteFound):
        plan_path(cubic, finite_point(2), finite_point(3), clearance_fraction=0.5)


def test_path_json_shape(cubic):
    js = plan_path(cubic, finite_point(-2, 1), finite_point(2, 1)).to_json()
    assert {"segments", "start", "end"} <= set(js)
    assert {s["type"] for s in js["segments"]} <= {"segment", "arc"}


def test_monodromy_single_and_double(cubic):
    y0 = complex(np.sqrt(cubic.f(0.5)))
    one = circle_path(cubic, 0, 0.5)
    assert continue_y(cubic, one, y0) == pytest.approx(-y0)
    two = circle_path(cubic, 0.5, 0.8, theta0=0.0)
    x0 = 0.5 + 0.8
    y0 = complex(np.sqrt(cubic.f(x0)))
    assert continue_y(cubic, two, y0) == pytest.approx(y0)


def test_continue_y_on_plain_segment(cubic):
    p = path_from_pieces(cubic, [Segment(2 + 1j, 3 + 2j)])
    y0 = complex(np.sqrt(cubic.f(2 + 1j)))
    y1 = continue_y(cubic, p, y0)
    # no branch cut crossed by the principal root along this segment
    assert y1 == pytest.approx(np.sqrt(cubic.f(3 + 2j)))


def test_inconsistent_start(cubic):
    p = path_from_pieces(cubic, [Segment(2, 3)])
    with pytest.raises(InconsistentStart):
        continue_y(cubic, p, 1.0)


def test_parity_examples(cubic):
    assert enclosed_branch_parity(cubic, circle_path(cubic, 0, 0.5)) == (1, 1)
    assert enclosed_branch_parity(cubic, circle_path(cubic, 0.5, 0.8)) == (2, 0)
    assert enclosed_branch_parity(cubic, circle_path(cubic, 3, 0.5)) == (0, 0)
    with pytest.raises(PathNotClosed):
        winding_numbers(cubic, path_from_pieces(cubic, [Segment(2, 3)]))


def test_contractible_square_integrates_to_zero(cubic):
    sq = polygon_path(cubic, [2 + 1j, 3 + 1j, 3 + 2j, 2 + 2j])
    y0 = complex(np.sqrt(cubic.f(2 + 1j)))
    assert abs(integrate(cubic, 1, sq, y0)) < 1e-10


def test_reversed_path_negates(cubic):
    p = plan_path(cubic, finite_point(-2 + 0.1j, 1), finite_point(2 - 0.3j, 1))
    y0 = cubic.y(finite_point(-2 + 0.1j, 1))
    fwd = integrate_path(cubic, p, y0)
    back = integrate_path(cubic, p.reversed(), fwd.y_end)
    assert np.allclose(back.values, -fwd.values, atol=1e-12)


def test_branch_segment_matches_oracle(cubic):
    p = plan_path(cubic, branch_point(0), branch_point(1))
    v = integrate_path(cubic, p).values[0]
    ref = ORACLES["x^3-x_segment_0_1"][1]
    assert abs(abs(v) - abs(ref)) < 1e-12


def test_loop_equals_twice_branch_segment(cubic):
    seg = integrate_path(cubic, plan_path(cubic, branch_point(0), branch_point(1))).values[0]
    # a loop around [0, 1] built from straight legs and two circles
    rho = 0.2
    pieces = [Segment(rho, 1 - rho), Arc(1, rho, math.pi, 2 * math.pi),
              Segment(1 - rho, rho), Arc(0, rho, 0.0, 2 * math.pi)]
    loop = path_from_pieces(cubic, pieces)
    v = integrate_path(cubic, loop, complex(np.sqrt(cubic.f(rho)))).values[0]
    assert abs(abs(v) - 2 * abs(seg)) < 1e-9


def test_order_doubling_is_stable():
    c = named_curve("x^5-1")
    p = plan_path(c, finite_point(0.1j, 1), finite_point(1.5 + 0.2j, -1))
    y0 = c.y(finite_point(0.1j, 1))
    a = integrate_path(c, p, y0, order=32).values
    b = integrate_path(c, p, y0, order=64).values
    assert np.max(np.abs(a - b)) < 1e-10


def test_additivity_over_split():
    c = named_curve("x^5-1")
    p = plan_path(c, finite_point(-1.5, 1), finite_point(1.5 + 0.1j, 1))
    y0 = c.y(finite_point(-1.5, 1))
    whole = integrate_path(c, p, y0)
    k = len(p.pieces) // 2
    first = path_from_pieces(c, p.pieces[:k])
    second = path_from_pieces(c, p.pieces[k:])
    a = integrate_path(c, first, y0)
    b = integrate_path(c, second, continue_y(c, first, y0))
    assert np.max(np.abs(a.values + b.values - whole.values)) < 1e-11


def test_integrate_rational_residue(cubic):
    v = integrate_rational(circle_path(cubic, 0.3 + 2j, 0.1), lambda x: 1 / (x - 0.3 - 2j))
    assert v == pytest.approx(2j * math.pi)


def test_lasso_swaps_sheet(cubic):
    p = lasso(cubic, 2.0)
    y0 = complex(np.sqrt(cubic.f(2.0)))
    assert p.is_closed and continue_y(cubic, p, y0) == pytest.approx(-y0)


def test_joining_through_branch_point_is_rejected(cubic):
    a = plan_path(cubic, finite_point(2), branch_point(1))
    b = planned_segment(cubic, 1, 3)
    with pytest.raises(InputError):
        a + b


@pytest.mark.parametrize("g", [1, 2, 3])
def test_random_closed_path_monodromy(g):
    rng = np.random.default_rng(7 + g)
    c = random_curve(g, rng)
    for _ in range(25):
        p = random_closed_path(c, rng)
        y0 = complex(np.sqrt(c.f(p.start_x)))
        _, parity = enclosed_branch_parity(c, p)
        y1 = continue_y(c, p, y0)
        assert abs(y1 - (-1) ** parity * y0) < 1e-8 * abs(y0)


@given(st.floats(0.05, 0.45), st.floats(0, 2 * math.pi))
def test_clearance_invariant(frac, theta):
    c = named_curve("x^5-3x+1+i")
    a = 3 * complex(math.cos(theta), math.sin(theta))
    p = planned_segment(c, a, -a, clearance_fraction=frac)
    assert p.clearance >= frac * c.discriminant_margin * (1 - 1e-9)


def test_clearance_shrinks_next_to_endpoints():
    c = named_curve("x^5-3x+1+i")
    r = 0.375 * c.discriminant_margin
    p = planned_segment(c, 2, -2, clearance_fraction=0.375)
    near = min(abs(x - e) for x in (2, -2) for e in c.roots)
    assert p.clearance >= min(r, 0.5 * near) * (1 - 1e-9)
