# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled periodic stencils on 4d lattices.

Both kernels perform exactly the floating-point operations of their NumPy
counterparts in ``_kernels_py`` (same operands, same order), so results are
bitwise identical across backends.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

# kind codes: 0 forward, 1 backward, 2 central


cdef inline void _neighbors(Py_ssize_t n, Py_ssize_t[::1] ip, Py_ssize_t[::1] im):
    cdef Py_ssize_t i
    for i in range(n):
        ip[i] = (i + 1) % n
        im[i] = (i - 1 + n) % n


def diff(const double[:, :, :, :, :, ::1] f, int axis, int kind, double scale):
    """Periodic difference of ``f`` (batch, N0, N1, N2, N3, M) along lattice ``axis``."""
    cdef Py_ssize_t B = f.shape[0], M = f.shape[5]
    cdef Py_ssize_t n0 = f.shape[1], n1 = f.shape[2], n2 = f.shape[3], n3 = f.shape[4]
    out_arr = np.empty((B, n0, n1, n2, n3, M), dtype=np.float64)
    cdef double[:, :, :, :, :, ::1] out = out_arr
    # per-axis index tables: identity except along the differenced axis
    tables = []
    for ax, n in enumerate((n0, n1, n2, n3)):
        idx = np.arange(n, dtype=np.intp)
        plus, minus = idx, idx
        if ax == axis:
            if kind != 1:
                plus = np.roll(idx, -1)
            if kind != 0:
                minus = np.roll(idx, 1)
        tables.append((np.ascontiguousarray(plus), np.ascontiguousarray(minus)))
    cdef Py_ssize_t[::1] p0 = tables[0][0], q0 = tables[0][1]
    cdef Py_ssize_t[::1] p1 = tables[1][0], q1 = tables[1][1]
    cdef Py_ssize_t[::1] p2 = tables[2][0], q2 = tables[2][1]
    cdef Py_ssize_t[::1] p3 = tables[3][0], q3 = tables[3][1]
    cdef Py_ssize_t b, i0, i1, i2, i3, m
    for b in range(B):
        for i0 in range(n0):
            for i1 in range(n1):
                for i2 in range(n2):
                    for i3 in range(n3):
                        for m in range(M):
                            out[b, i0, i1, i2, i3, m] = (
                                f[b, p0[i0], p1[i1], p2[i2], p3[i3], m] - f[b, q0[i0], q1[i1], q2[i2], q3[i3], m]
                            ) * scale
    return out_arr


def dirac(const double[:, :, :, :, ::1] u, int kind, double scale, double c0):
    """Fused quaternionic stencil c0*D0 u + i D1 u + j D2 u + k D3 u (left products)."""
    cdef Py_ssize_t n0 = u.shape[0], n1 = u.shape[1], n2 = u.shape[2], n3 = u.shape[3]
    out_arr = np.empty((n0, n1, n2, n3, 4), dtype=np.float64)
    cdef double[:, :, :, :, ::1] out = out_arr
    cdef Py_ssize_t[::1] ip0 = np.empty(n0, dtype=np.intp)
    cdef Py_ssize_t[::1] im0 = np.empty(n0, dtype=np.intp)
    cdef Py_ssize_t[::1] ip1 = np.empty(n1, dtype=np.intp)
    cdef Py_ssize_t[::1] im1 = np.empty(n1, dtype=np.intp)
    cdef Py_ssize_t[::1] ip2 = np.empty(n2, dtype=np.intp)
    cdef Py_ssize_t[::1] im2 = np.empty(n2, dtype=np.intp)
    cdef Py_ssize_t[::1] ip3 = np.empty(n3, dtype=np.intp)
    cdef Py_ssize_t[::1] im3 = np.empty(n3, dtype=np.intp)
    _neighbors(n0, ip0, im0)
    _neighbors(n1, ip1, im1)
    _neighbors(n2, ip2, im2)
    _neighbors(n3, ip3, im3)
    cdef Py_ssize_t i0, i1, i2, i3, a0, b0, a1, b1, a2, b2, a3, b3
    cdef double d0[4]
    cdef double d1[4]
    cdef double d2[4]
    cdef double d3[4]
    cdef int m
    for i0 in range(n0):
        a0 = i0 if kind == 1 else ip0[i0]
        b0 = i0 if kind == 0 else im0[i0]
        for i1 in range(n1):
            a1 = i1 if kind == 1 else ip1[i1]
            b1 = i1 if kind == 0 else im1[i1]
            for i2 in range(n2):
                a2 = i2 if kind == 1 else ip2[i2]
                b2 = i2 if kind == 0 else im2[i2]
                for i3 in range(n3):
                    a3 = i3 if kind == 1 else ip3[i3]
                    b3 = i3 if kind == 0 else im3[i3]
                    for m in range(4):
                        d0[m] = (u[a0, i1, i2, i3, m] - u[b0, i1, i2, i3, m]) * scale
                        d1[m] = (u[i0, a1, i2, i3, m] - u[i0, b1, i2, i3, m]) * scale
                        d2[m] = (u[i0, i1, a2, i3, m] - u[i0, i1, b2, i3, m]) * scale
                        d3[m] = (u[i0, i1, i2, a3, m] - u[i0, i1, i2, b3, m]) * scale
                    # i*(w,x,y,z) = (-x, w, -z, y); j*q = (-y, z, w, -x); k*q = (-z, -y, x, w)
                    out[i0, i1, i2, i3, 0] = c0 * d0[0] + (-d1[1]) + (-d2[2]) + (-d3[3])
                    out[i0, i1, i2, i3, 1] = c0 * d0[1] + d1[0] + d2[3] + (-d3[2])
                    out[i0, i1, i2, i3, 2] = c0 * d0[2] + (-d1[3]) + d2[0] + d3[1]
                    out[i0, i1, i2, i3, 3] = c0 * d0[3] + d1[2] + (-d2[1]) + d3[0]
    return out_arr
