"""Regenerate ``values.json`` with mpmath (tanh-sinh quadrature, 30 digits).

Nothing here uses the package under test.  Lattice generators are
``2 * int_{e_i}^{e_j} x**k dx / y`` along straight chords between branch
points; for the curves below no chord passes near another branch point, and
the chords between consecutive roots (in any fixed order) generate the
lattice.

Run with ``python tests/oracles/make_oracles.py``.
"""
import itertools
import json
import os

import mpmath as mp

mp.mp.dps = 30

CURVES = {
    "x^3-x": [0, -1, 0, 1],
    "x^3-1": [-1, 0, 0, 1],
    "x^5-1": [-1, 0, 0, 0, 0, 1],
    "x^7-1": [-1, 0, 0, 0, 0, 0, 0, 1],
    "x^5-3x+1+i": [1 + 1j, -3, 0, 0, 0, 1],
}


def roots_of(coeffs):
    desc = [mp.mpc(c) for c in reversed(coeffs)]
    return mp.polyroots(desc, maxsteps=200, extraprec=60)


def chord_integrals(roots, i, j, g):
    ei, ej = roots[i], roots[j]
    d = ej - ei
    others = [e for k, e in enumerate(roots) if k not in (i, j)]
    h0 = mp.fprod([ei - e for e in others])
    s0 = mp.sqrt(h0)

    def y(t):
        x = ei + t * d
        h = s0 * mp.fprod([mp.sqrt((x - e) / (ei - e)) for e in others])
        return 1j * d * mp.sqrt(t) * mp.sqrt(1 - t) * h

    return [2 * mp.quad(lambda t: (ei + t * d) ** k * d / y(t), [0, 1]) for k in range(g)]


def chord_clear(roots, i, j):
    ei, ej = roots[i], roots[j]
    best = mp.inf
    for k, e in enumerate(roots):
        if k in (i, j):
            continue
        t = mp.re((e - ei) * mp.conj(ej - ei)) / abs(ej - ei) ** 2
        t = min(max(t, 0), 1)
        best = min(best, abs(ei + t * (ej - ei) - e))
    return best


def main():
    out = {"lemniscate": float(2 * mp.quad(lambda t: 1 / mp.sqrt(1 - t ** 4), [0, 1]))}
    out["x^3-x_segment_0_1"] = [0.0, float(mp.im(mp.quad(lambda x: 1 / mp.sqrt(x ** 3 - x), [0, 1])))]
    lattices = {}
    for name, coeffs in CURVES.items():
        roots = sorted(roots_of(coeffs), key=lambda z: (float(mp.re(z)), float(mp.im(z))))
        g = (len(roots) - 1) // 2
        # consecutive chords in an order whose chords stay clear of other roots
        for perm in itertools.permutations(range(len(roots))):
            if all(chord_clear(roots, a, b) > 0.05 for a, b in zip(perm, perm[1:])):
                break
        gens = [chord_integrals(roots, a, b, g) for a, b in list(zip(perm, perm[1:]))]
        lattices[name] = [[[float(mp.re(v)), float(mp.im(v))] for v in row] for row in gens]
    out["lattices"] = lattices
    path = os.path.join(os.path.dirname(__file__), "values.json")
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
