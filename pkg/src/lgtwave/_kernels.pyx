# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot loops for Pauli-string action on statevectors.

A Pauli string is packed into two bit masks (z, x): bit q of ``x`` flips
qubit q, bit q of ``z`` contributes a sign (-1)^{bit q of the basis index}.
Any i^k prefactor from Y letters is folded into ``coeff`` by the caller.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    static inline int lgtwave_popcount64(unsigned long long v) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(v);
    #else
        int c = 0;
        while (v) { v &= v - 1; c++; }
        return c;
    #endif
    }
    """
    int lgtwave_popcount64(unsigned long long v) nogil


def apply_term(unsigned long long z, unsigned long long x,
               double complex coeff,
               double complex[::1] src,
               double complex[::1] out):
    """out[i] += coeff * (-1)^popcount((i^x) & z) * src[i ^ x], for all i."""
    cdef Py_ssize_t dim = src.shape[0]
    cdef Py_ssize_t i
    cdef unsigned long long j
    with nogil:
        for i in range(dim):
            j = (<unsigned long long> i) ^ x
            if lgtwave_popcount64(j & z) & 1:
                out[i] = out[i] - coeff * src[j]
            else:
                out[i] = out[i] + coeff * src[j]


def apply_sum(unsigned long long[::1] zs, unsigned long long[::1] xs,
              double complex[::1] coeffs,
              double complex[::1] src,
              double complex[::1] out):
    """Accumulate every term in fixed order (bit-stable reduction)."""
    cdef Py_ssize_t t
    for t in range(zs.shape[0]):
        apply_term(zs[t], xs[t], coeffs[t], src, out)
