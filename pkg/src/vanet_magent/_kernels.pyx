# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics are identical to ``_kernels_py``."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free


cdef inline uint64_t _mix(uint64_t x) nogil:
    cdef uint64_t z = x + <uint64_t>0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def splitmix64(x):
    return _mix(<uint64_t>(x & 0xFFFFFFFFFFFFFFFF))


def hash4(seed, a, b, c):
    cdef uint64_t m = 0xFFFFFFFFFFFFFFFF
    cdef uint64_t h = _mix(<uint64_t>(seed & m))
    h = _mix(h ^ <uint64_t>(a & m))
    h = _mix(h ^ <uint64_t>(b & m))
    return _mix(h ^ <uint64_t>(c & m))


def unit_disk_pairs(xs, ys, double range_m):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t i, j
    cdef double r2 = range_m * range_m
    cdef double xi, yi, dx, dy
    cdef double *px = <double *>malloc(n * sizeof(double) + 1)
    cdef double *py = <double *>malloc(n * sizeof(double) + 1)
    if px == NULL or py == NULL:
        free(px)
        free(py)
        raise MemoryError()
    out = []
    try:
        for i in range(n):
            px[i] = xs[i]
            py[i] = ys[i]
        for i in range(n):
            xi = px[i]
            yi = py[i]
            for j in range(i + 1, n):
                dx = px[j] - xi
                dy = py[j] - yi
                if dx * dx + dy * dy <= r2:
                    out.append((i, j))
    finally:
        free(px)
        free(py)
    return out
