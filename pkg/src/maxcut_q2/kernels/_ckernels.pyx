# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector and local-search kernels.

Same signatures and semantics as ``_pykernels``; arrays are modified in place
where noted. The GIL is released inside every loop.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin
from libc.stdint cimport int64_t, int8_t

cnp.import_array()

NAME = "cython"


def cost_diagonal(int n, const int64_t[::1] src, const int64_t[::1] dst,
                  const double[::1] w, int64_t start=0, count=None):
    cdef int64_t total = (<int64_t>1) << n
    cdef int64_t m = total - start if count is None else count
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] c = out
    cdef Py_ssize_t ne = src.shape[0]
    cdef int64_t b, idx
    cdef Py_ssize_t e
    cdef double acc
    with nogil:
        for idx in range(m):
            b = start + idx
            acc = 0.0
            for e in range(ne):
                if ((b >> src[e]) ^ (b >> dst[e])) & 1:
                    acc = acc + w[e]
            c[idx] = acc
    return out


def apply_phase(psi, const double[::1] cost, double gamma):
    cdef double[::1] v = psi.view(np.float64)
    cdef Py_ssize_t m = cost.shape[0]
    cdef Py_ssize_t b
    cdef double ang, cr, ci, re, im
    with nogil:
        for b in range(m):
            ang = gamma * cost[b]
            cr = cos(ang)
            ci = -sin(ang)
            re = v[2 * b]
            im = v[2 * b + 1]
            v[2 * b] = re * cr - im * ci
            v[2 * b + 1] = re * ci + im * cr


def apply_mixer(psi, int n, double beta):
    cdef double[::1] v = psi.view(np.float64)
    cdef int64_t dim = (<int64_t>1) << n
    cdef double c = cos(beta)
    cdef double s = sin(beta)
    cdef int64_t step, block, off, i0, i1
    cdef double a0r, a0i, a1r, a1i
    cdef int k
    with nogil:
        for k in range(n):
            step = (<int64_t>1) << k
            block = 0
            while block < dim:
                for off in range(step):
                    i0 = 2 * (block + off)
                    i1 = i0 + 2 * step
                    a0r = v[i0]
                    a0i = v[i0 + 1]
                    a1r = v[i1]
                    a1i = v[i1 + 1]
                    v[i0] = c * a0r + s * a1i
                    v[i0 + 1] = c * a0i - s * a1r
                    v[i1] = c * a1r + s * a0i
                    v[i1 + 1] = c * a1i - s * a0r
                block += 2 * step


def one_exchange(const int64_t[::1] indptr, const int64_t[::1] indices,
                 const double[::1] weights, int8_t[::1] spins, double tol):
    cdef Py_ssize_t n = spins.shape[0]
    cdef Py_ssize_t i, k
    cdef double gain
    cdef bint improved = True
    cdef int64_t flips = 0
    with nogil:
        while improved:
            improved = False
            for i in range(n):
                gain = 0.0
                for k in range(indptr[i], indptr[i + 1]):
                    gain = gain + weights[k] * spins[i] * spins[indices[k]]
                if gain > tol:
                    spins[i] = -spins[i]
                    flips += 1
                    improved = True
    return flips
