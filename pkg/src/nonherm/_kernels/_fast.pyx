# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics match ``reference.py`` exactly.

All matrices are row-major complex buffers on the stack: 2x2 gates hold 4
entries, 4x4 chain products hold 16.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, sin, sqrt

cnp.import_array()

N_PARAMS = 24


cdef void _u3(double a, double b, double c, double complex* u) noexcept nogil:
    cdef double ca = cos(0.5 * a)
    cdef double sa = sin(0.5 * a)
    u[0] = ca
    u[1] = -(cos(c) + 1j * sin(c)) * sa
    u[2] = (cos(b) + 1j * sin(b)) * sa
    u[3] = (cos(b + c) + 1j * sin(b + c)) * ca


cdef void _layer(const double* r, int k, double complex* out) noexcept nogil:
    """kron(U_system, U_ancilla) for layer k."""
    cdef double complex uq[4]
    cdef double complex ua[4]
    cdef int i, j, a, b
    _u3(r[3 * k], r[3 * k + 1], r[3 * k + 2], uq)
    _u3(r[12 + 3 * k], r[12 + 3 * k + 1], r[12 + 3 * k + 2], ua)
    for i in range(2):
        for j in range(2):
            for a in range(2):
                for b in range(2):
                    out[(2 * i + a) * 4 + (2 * j + b)] = uq[2 * i + j] * ua[2 * a + b]


cdef void _matmul4(const double complex* x, const double complex* y, double complex* out) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + x[4 * i + k] * y[4 * k + j]
            out[4 * i + j] = acc


cdef void _swap_cx_rows(double complex* m) noexcept nogil:
    """Left-multiply by the ancilla-controlled NOT: swap rows 1 and 3."""
    cdef double complex tmp
    cdef int j
    for j in range(4):
        tmp = m[4 * 1 + j]
        m[4 * 1 + j] = m[4 * 3 + j]
        m[4 * 3 + j] = tmp


cdef void _chain(const double* r, double complex* v) noexcept nogil:
    cdef double complex layer[16]
    cdef double complex work[16]
    cdef int k, i
    _layer(r, 0, v)
    for k in range(1, 4):
        _swap_cx_rows(v)
        _layer(r, k, layer)
        _matmul4(layer, v, work)
        for i in range(16):
            v[i] = work[i]


def ansatz_unitary(r):
    """Full 4x4 unitary of the two-qubit variational circuit."""
    cdef cnp.ndarray[double, ndim=1] rr = np.ascontiguousarray(r, dtype=np.float64)
    if rr.shape[0] != 24:
        raise ValueError("parameter vector must have 24 entries")
    out = np.empty((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] mv = out
    _chain(&rr[0], &mv[0, 0])
    return out


def ansatz_block(r):
    """Top-left (ancilla |0> -> |0>) 2x2 block of the circuit unitary."""
    cdef cnp.ndarray[double, ndim=1] rr = np.ascontiguousarray(r, dtype=np.float64)
    if rr.shape[0] != 24:
        raise ValueError("parameter vector must have 24 entries")
    cdef double complex v[16]
    _chain(&rr[0], v)
    out = np.empty((2, 2), dtype=np.complex128)
    cdef double complex[:, ::1] mv = out
    mv[0, 0] = v[0]
    mv[0, 1] = v[2]
    mv[1, 0] = v[8]
    mv[1, 1] = v[10]
    return out


def ansatz_block_shifts(r, double shift):
    """Block at r plus blocks at r[k] +- shift for every parameter k.

    Returns (block, plus, minus) with plus/minus of shape (24, 2, 2).
    """
    cdef cnp.ndarray[double, ndim=1] rr = np.ascontiguousarray(r, dtype=np.float64)
    if rr.shape[0] != 24:
        raise ValueError("parameter vector must have 24 entries")
    base = np.empty((2, 2), dtype=np.complex128)
    plus = np.empty((24, 2, 2), dtype=np.complex128)
    minus = np.empty((24, 2, 2), dtype=np.complex128)
    cdef double complex[:, ::1] bv = base
    cdef double complex[:, :, ::1] pv = plus
    cdef double complex[:, :, ::1] mv = minus
    cdef double work[24]
    cdef double complex v[16]
    cdef int k, i
    with nogil:
        for i in range(24):
            work[i] = rr[i]
        _chain(work, v)
        bv[0, 0] = v[0]
        bv[0, 1] = v[2]
        bv[1, 0] = v[8]
        bv[1, 1] = v[10]
        for k in range(24):
            work[k] = rr[k] + shift
            _chain(work, v)
            pv[k, 0, 0] = v[0]
            pv[k, 0, 1] = v[2]
            pv[k, 1, 0] = v[8]
            pv[k, 1, 1] = v[10]
            work[k] = rr[k] - shift
            _chain(work, v)
            mv[k, 0, 0] = v[0]
            mv[k, 0, 1] = v[2]
            mv[k, 1, 0] = v[8]
            mv[k, 1, 1] = v[10]
            work[k] = rr[k]
    return base, plus, minus


def trotter_run(amp0, double theta, double phi, int steps, bint gaussian, double floor):
    """Apply ``steps`` postselected Kraus steps to a single-qubit amplitude pair.

    Each step is Rx(theta) followed by diag(1, k1) with k1 = cos(phi/2) or
    exp(-phi^2/8), renormalized; per-step squared norms are recorded.
    Returns (final_amplitudes, per_step) or (None, truncated per_step) if a
    step probability falls below ``floor``.
    """
    cdef cnp.ndarray[double complex, ndim=1] a = np.ascontiguousarray(amp0, dtype=np.complex128)
    if a.shape[0] != 2:
        raise ValueError("amplitude vector must have 2 entries")
    cdef double c = cos(0.5 * theta)
    cdef double s = sin(0.5 * theta)
    cdef double k1 = exp(-phi * phi / 8.0) if gaussian else cos(0.5 * phi)
    per_step = np.empty(steps, dtype=np.float64)
    cdef double[::1] pview = per_step
    cdef double complex a0 = a[0]
    cdef double complex a1 = a[1]
    cdef double complex b0, b1
    cdef double p, inv
    cdef int k
    cdef int failed_at = -1
    with nogil:
        for k in range(steps):
            b0 = c * a0 - 1j * s * a1
            b1 = (-1j * s * a0 + c * a1) * k1
            p = (b0.real * b0.real + b0.imag * b0.imag
                 + b1.real * b1.real + b1.imag * b1.imag)
            if p < floor:
                failed_at = k
                break
            pview[k] = p
            inv = 1.0 / sqrt(p)
            a0 = b0 * inv
            a1 = b1 * inv
    if failed_at >= 0:
        return None, per_step[:failed_at]
    return np.array([a0, a1], dtype=np.complex128), per_step
