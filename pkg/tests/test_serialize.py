import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abeljacobi import INFINITY, Divisor, branch_point, finite_point, linear, new_curve, ycoord
from abeljacobi.errors import InputError
from abeljacobi.serialize import (
    curve_from_json,
    curve_to_json,
    divisor_from_json,
    divisor_to_json,
    dumps,
    function_from_json,
    function_to_json,
    parse_cx,
    point_from_json,
    point_to_json,
)

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite, finite)
def test_complex_round_trip_is_exact(re, im):
    z = complex(re, im)
    assert parse_cx(json.loads(dumps([z.real, z.imag]))) == z


def test_curve_round_trip():
    c = new_curve([0.1 + 0.2j, -1, 0, 1])
    c2 = curve_from_json(json.loads(dumps(curve_to_json(c))))
    assert c2.coeffs == c.coeffs and np.array_equal(c2.roots, c.roots)


def test_point_round_trip():
    for P in (finite_point(1 + 2j, -1), branch_point(0.5), INFINITY):
        assert point_from_json(point_to_json(P)) == P


def test_divisor_round_trip():
    D = Divisor([(finite_point(2, 1), 1), (finite_point(2, -1), 1), (INFINITY, -2)])
    assert divisor_from_json(json.loads(dumps(divisor_to_json(D)))) == D


def test_function_round_trip():
    h = linear(2) * ycoord() ** -1
    assert function_from_json(function_to_json(h)) == h


@pytest.mark.parametrize("bad", [{"x": "a"}, {"kind": "weird", "x": [0, 0]}, {"x": [1, 0], "sheet": 2}, 3])
def test_bad_points(bad):
    with pytest.raises(InputError):
        point_from_json(bad)


def test_bad_divisor():
    with pytest.raises(InputError):
        divisor_from_json({"entries": [{"point": {"kind": "infinity"}, "mult": 1.5}]})
    with pytest.raises(InputError):
        divisor_from_json({})


def test_dumps_is_sorted_and_stable():
    s = dumps({"b": 1j, "a": np.array([1 + 2j])})
    assert s == dumps({"a": np.array([1 + 2j]), "b": 1j})
    assert json.loads(s) == {"a": [[1.0, 2.0]], "b": [0.0, 1.0]}
