"""Pure numpy implementation of the quadrature and continuation kernels.

Signatures match the compiled ``_kernels`` extension exactly; see
:mod:`abeljacobi.kernels` for the selection logic.
"""
import numpy as np


def continuation_ratio(xs, roots, x0):
    """``prod_i sqrt((x - e_i) / (x0 - e_i))`` with principal square roots.

    Multiplying a y-value at ``x0`` by this ratio continues it analytically to
    ``x`` along any path on which no factor crosses the negative real axis
    (for instance a straight segment avoiding the roots).
    """
    xs = np.asarray(xs, dtype=complex)
    roots = np.asarray(roots, dtype=complex)
    if roots.size == 0:
        return np.ones_like(xs)
    return np.prod(np.sqrt((xs[..., None] - roots) / (x0 - roots)), axis=-1)


def piece_integrals(xs, dxw, roots, x0, y0, g):
    """Weighted sums ``sum_m dxw[m] * xs[m]**k / y(xs[m])`` for ``k < g``.

    ``y`` is continued from ``y0`` at ``x0`` with :func:`continuation_ratio`.
    """
    xs = np.asarray(xs, dtype=complex)
    y = y0 * continuation_ratio(xs, roots, x0)
    base = np.asarray(dxw, dtype=complex) / y
    powers = xs[:, None] ** np.arange(g)
    return base @ powers


def arg_increment(x_from, x_to, roots):
    """Total change of ``arg f`` from ``x_from`` to ``x_to`` along the chord."""
    roots = np.asarray(roots, dtype=complex)
    return float(np.sum(np.angle((x_to - roots) / (x_from - roots))))


def segment_crossings(a0, a1, b0, b1, eps):
    """Transversal crossings between two polylines given by edge arrays.

    ``a0[i] -> a1[i]`` and ``b0[j] -> b1[j]`` are edges.  Returns arrays
    ``(i, j, s, t, cross)`` of crossing edge indices, the edge parameters in
    ``[0, 1)`` and the orientation cross product ``Im(conj(da) * db)``.
    Crossings whose parameter is within ``eps`` of an edge end are reported
    with ``s`` or ``t`` possibly outside ``[0, 1)`` by less than ``eps`` so
    the caller can flag them as ambiguous.
    """
    a0 = np.asarray(a0, dtype=complex)[:, None]
    a1 = np.asarray(a1, dtype=complex)[:, None]
    b0 = np.asarray(b0, dtype=complex)[None, :]
    b1 = np.asarray(b1, dtype=complex)[None, :]
    da = a1 - a0
    db = b1 - b0
    w = b0 - a0
    den = (np.conj(da) * db).imag
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (np.conj(w) * db).imag / den
        t = (np.conj(w) * da).imag / den
    ok = (den != 0) & (s >= -eps) & (s < 1 + eps) & (t >= -eps) & (t < 1 + eps)
    i, j = np.nonzero(ok)
    return i, j, s[i, j], t[i, j], den[i, j]
