# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; same stream layout as ``_pykernels``."""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, log, sin, sqrt
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.1102230246251565e-16
cdef double TWO_PI = 6.283185307179586


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, uint64_t counter) noexcept nogil:
    return (<double>(mix64(key + (counter + 1) * GOLDEN) >> 11) + 0.5) * TWO_M53


def complex_normal_batch(keys, Py_ssize_t start, Py_ssize_t count, double variance):
    cdef const uint64_t[::1] k = np.ascontiguousarray(keys, dtype=np.uint64)
    cdef Py_ssize_t trials = k.shape[0]
    out = np.empty((trials, count), dtype=np.complex128)
    cdef double[:, ::1] view = out.view(np.float64)
    cdef Py_ssize_t t, i
    cdef uint64_t slot
    cdef double mag, theta
    with nogil:
        for t in range(trials):
            for i in range(count):
                slot = <uint64_t>(start + 2 * i)
                mag = sqrt(-variance * log(uniform(k[t], slot)))
                theta = TWO_PI * uniform(k[t], slot + 1)
                view[t, 2 * i] = mag * cos(theta)
                view[t, 2 * i + 1] = mag * sin(theta)
    return out


def max_snr_batch(keys, double direct_variance, double path_variance, Py_ssize_t n_paths):
    cdef const uint64_t[::1] k = np.ascontiguousarray(keys, dtype=np.uint64)
    cdef Py_ssize_t trials = k.shape[0]
    out = np.empty(trials, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t t, n
    cdef double total
    with nogil:
        for t in range(trials):
            total = sqrt(-direct_variance * log(uniform(k[t], 0)))
            for n in range(1, n_paths + 1):
                total = total + sqrt(-path_variance * log(uniform(k[t], <uint64_t>(2 * n))))
            res[t] = total * total
    return out
