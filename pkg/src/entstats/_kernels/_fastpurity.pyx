# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled purity kernels.

Same contract as the numpy fallback: gather each state into a
2^n_A x 2^n_Abar matrix M and accumulate the squared Frobenius norm of
G = M M^H.  Hermitian symmetry halves the work and the outer
accumulation is Kahan-compensated, so 2^(2n)-term traces keep full
double precision.
"""

import numpy as np

BACKEND = "cython"


cdef double _state_purity(const double complex *z, const Py_ssize_t *src,
                          double complex *buf, Py_ssize_t rows,
                          Py_ssize_t cols) noexcept nogil:
    cdef Py_ssize_t i, i2, j
    cdef double complex g
    cdef double acc = 0.0, comp = 0.0, term, y, t
    for i in range(rows * cols):
        buf[i] = z[src[i]]
    for i in range(rows):
        for i2 in range(i, rows):
            g = 0
            for j in range(cols):
                g = g + buf[i * cols + j] * buf[i2 * cols + j].conjugate()
            term = g.real * g.real + g.imag * g.imag
            if i2 != i:
                term = term + term  # off-diagonal pairs counted once above
            # Kahan-compensated accumulation
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
    return acc


def purity_fixed_batch(const double complex[:, ::1] amps,
                       const Py_ssize_t[::1] src, Py_ssize_t rows):
    """Purity of every state in ``amps`` for one bipartition."""
    cdef Py_ssize_t nstates = amps.shape[0]
    cdef Py_ssize_t dim = amps.shape[1]
    cdef Py_ssize_t cols = dim // rows
    out_arr = np.empty(nstates, dtype=np.float64)
    buf_arr = np.empty(dim, dtype=np.complex128)
    cdef double[::1] out = out_arr
    cdef double complex[::1] buf = buf_arr
    cdef Py_ssize_t b
    with nogil:
        for b in range(nstates):
            out[b] = _state_purity(&amps[b, 0], &src[0], &buf[0], rows, cols)
    return out_arr


def purity_weighted_batch(const double complex[:, ::1] amps,
                          const Py_ssize_t[:, ::1] srcs,
                          const double[::1] weights, Py_ssize_t rows):
    """Weighted average of per-bipartition purities for every state."""
    cdef Py_ssize_t nstates = amps.shape[0]
    cdef Py_ssize_t nbip = srcs.shape[0]
    cdef Py_ssize_t dim = amps.shape[1]
    cdef Py_ssize_t cols = dim // rows
    out_arr = np.empty(nstates, dtype=np.float64)
    buf_arr = np.empty(dim, dtype=np.complex128)
    cdef double[::1] out = out_arr
    cdef double complex[::1] buf = buf_arr
    cdef double wsum = 0.0, acc
    cdef Py_ssize_t b, ib
    for ib in range(nbip):
        wsum += weights[ib]
    with nogil:
        for b in range(nstates):
            acc = 0.0
            for ib in range(nbip):
                acc += weights[ib] * _state_purity(&amps[b, 0], &srcs[ib, 0],
                                                   &buf[0], rows, cols)
            out[b] = acc / wsum
    return out_arr
