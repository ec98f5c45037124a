# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature and continuation kernels.

Drop-in replacement for :mod:`abeljacobi._kernels_py`; every function takes
and returns the same objects.
"""
import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double carg(double complex)
    double complex conj(double complex)

cnp.import_array()


def continuation_ratio(xs, roots, double complex x0):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] xv = np.ascontiguousarray(xs, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rv = np.ascontiguousarray(roots, dtype=np.complex128).ravel()
    cdef Py_ssize_t m, i, nx = xv.shape[0], nr = rv.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(nx, dtype=np.complex128)
    cdef double complex acc
    for m in range(nx):
        acc = 1.0
        for i in range(nr):
            acc = acc * csqrt((xv[m] - rv[i]) / (x0 - rv[i]))
        out[m] = acc
    return out.reshape(np.shape(xs))


def piece_integrals(xs, dxw, roots, double complex x0, double complex y0, int g):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] xv = np.ascontiguousarray(xs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] wv = np.ascontiguousarray(dxw, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rv = np.ascontiguousarray(roots, dtype=np.complex128)
    cdef Py_ssize_t m, i, k, nx = xv.shape[0], nr = rv.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(g, dtype=np.complex128)
    cdef double complex ratio, term, xp
    for m in range(nx):
        ratio = 1.0
        for i in range(nr):
            ratio = ratio * csqrt((xv[m] - rv[i]) / (x0 - rv[i]))
        term = wv[m] / (y0 * ratio)
        xp = 1.0
        for k in range(g):
            out[k] = out[k] + term * xp
            xp = xp * xv[m]
    return out


def arg_increment(double complex x_from, double complex x_to, roots):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rv = np.ascontiguousarray(roots, dtype=np.complex128)
    cdef Py_ssize_t i, nr = rv.shape[0]
    cdef double total = 0.0
    for i in range(nr):
        total += carg((x_to - rv[i]) / (x_from - rv[i]))
    return total


def segment_crossings(a0, a1, b0, b1, double eps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] A0 = np.ascontiguousarray(a0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] A1 = np.ascontiguousarray(a1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] B0 = np.ascontiguousarray(b0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] B1 = np.ascontiguousarray(b1, dtype=np.complex128)
    cdef Py_ssize_t i, j, na = A0.shape[0], nb = B0.shape[0]
    cdef double complex da, db, w
    cdef double den, s, t
    cdef double ax0, ax1, ay0, ay1, bx0, bx1, by0, by1
    ii, jj, ss, tt, dd = [], [], [], [], []
    for i in range(na):
        ax0 = min(A0[i].real, A1[i].real); ax1 = max(A0[i].real, A1[i].real)
        ay0 = min(A0[i].imag, A1[i].imag); ay1 = max(A0[i].imag, A1[i].imag)
        da = A1[i] - A0[i]
        for j in range(nb):
            # bounding-box rejection
            bx0 = min(B0[j].real, B1[j].real); bx1 = max(B0[j].real, B1[j].real)
            if bx1 < ax0 or bx0 > ax1:
                continue
            by0 = min(B0[j].imag, B1[j].imag); by1 = max(B0[j].imag, B1[j].imag)
            if by1 < ay0 or by0 > ay1:
                continue
            db = B1[j] - B0[j]
            den = (conj(da) * db).imag
            if den == 0.0:
                continue
            w = B0[j] - A0[i]
            s = (conj(w) * db).imag / den
            t = (conj(w) * da).imag / den
            if s >= -eps and s < 1 + eps and t >= -eps and t < 1 + eps:
                ii.append(i); jj.append(j); ss.append(s); tt.append(t); dd.append(den)
    return (np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp),
            np.array(ss, dtype=float), np.array(tt, dtype=float), np.array(dd, dtype=float))
