# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gillespie lane: per-path event loop over splitmix64 streams.

Consumes the same per-path draw sequence as the numpy lockstep fallback in
``_gillespie_pure`` (one uniform for the holding time, one for the direction
when the jump lands inside the horizon).
"""
from libc.math cimport log1p

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t bdk_mix64(uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27; z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }
    """
    cnp.uint64_t bdk_mix64(cnp.uint64_t z) nogil

cdef inline cnp.uint64_t _scramble(cnp.uint64_t z) nogil:
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27; z *= 0x94D049BB133111EBULL
    z ^= z >> 31
    return z

cdef inline double _uniform(cnp.uint64_t* state) nogil:
    state[0] += 0x9E3779B97F4A7C15ULL
    return <double>(_scramble(state[0]) >> 11) * (1.0 / 9007199254740992.0)


def run_paths(double[::1] B, double[::1] D, int y0, double t,
              long n_paths, unsigned long long seed):
    """Mirror of ``_gillespie_pure.run_paths`` (same streams, same law)."""
    cdef Py_ssize_t S = B.shape[0]
    cdef long[::1] finals = np.empty(n_paths, dtype=np.int64)
    cdef long attempts = 0
    cdef long i
    cdef int x, x_edge = <int>(S - 1)
    cdef double clock, rate, u1, u2
    cdef cnp.uint64_t st

    with nogil:
        for i in range(n_paths):
            st = bdk_mix64(bdk_mix64(seed + <cnp.uint64_t>i * 0x94D049BB133111EBULL))
            x = y0
            clock = 0.0
            while True:
                rate = B[x] + D[x]
                u1 = _uniform(&st)
                clock += -log1p(-u1) / rate
                if clock > t:
                    break
                u2 = _uniform(&st)
                if u2 * rate < B[x]:
                    if x == x_edge:
                        attempts += 1
                    else:
                        x += 1
                else:
                    x -= 1
            finals[i] = x
    return np.asarray(finals), attempts
