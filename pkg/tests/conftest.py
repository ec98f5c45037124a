import json
import os
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from abeljacobi import new_curve, period_lattice, period_matrices

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ORACLES = json.load(open(os.path.join(os.path.dirname(__file__), "oracles", "values.json")))

NAMED = {
    "x^3-x": [0, -1, 0, 1],
    "x^3-1": [-1, 0, 0, 1],
    "x^5-1": [-1, 0, 0, 0, 0, 1],
    "x^7-1": [-1, 0, 0, 0, 0, 0, 0, 1],
    "x^5-3x+1+i": [1 + 1j, -3, 0, 0, 0, 1],
    "x^9+x": [0, 1, 0, 0, 0, 0, 0, 0, 0, 1],
}


@lru_cache(maxsize=None)
def named_curve(name):
    return new_curve(NAMED[name])


@lru_cache(maxsize=None)
def pipeline(name):
    c = named_curve(name)
    P = period_matrices(c)
    return c, P, period_lattice(P)


def oracle_lattice(name):
    return np.array(ORACLES["lattices"][name]) @ np.array([1, 1j])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
