"""Sampling helpers shared by the test modules."""
import numpy as np

from abeljacobi.paths import polygon_path


def random_closed_path(curve, rng, max_vertices=6):
    """A planned closed polygon through 3..max_vertices random vertices."""
    R = 1.5 * max(1.0, float(np.max(np.abs(curve.roots))))
    gap = 0.3 * curve.discriminant_margin
    n = int(rng.integers(3, max_vertices + 1))
    verts = []
    while len(verts) < n:
        z = R * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        if np.min(np.abs(curve.roots - z)) > gap:
            verts.append(complex(z))
    return polygon_path(curve, verts)
