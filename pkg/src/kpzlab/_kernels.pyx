# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled renormalization-sum kernels.

Mirrors ``_kernels_py`` exactly: same loop order, same Kahan compensation,
so switching backends changes results only at the few-ulp level.
"""

from libc.math cimport M_PI


cdef double TWO_PI_SQ = 2.0 * M_PI * M_PI


cdef inline void kadd(double x, double* s, double* c) nogil:
    cdef double y = x - c[0]
    cdef double t = s[0] + y
    c[0] = (t - s[0]) - y
    s[0] = t


def pair_sums(double[::1] phi2, int kmax, bint tilde):
    cdef double sb = 0.0, cb = 0.0, sd = 0.0, cd = 0.0
    cdef double p1, p2, p12, denom
    cdef int k1, k2, k12
    with nogil:
        for k1 in range(-kmax, kmax + 1):
            if k1 == 0:
                continue
            p1 = phi2[abs(k1)]
            if p1 == 0.0:
                continue
            for k2 in range(-kmax, kmax + 1):
                if k2 == 0:
                    continue
                k12 = k1 + k2
                if k12 == 0:
                    continue
                p2 = phi2[abs(k2)]
                if p2 == 0.0:
                    continue
                p12 = phi2[abs(k12)]
                denom = TWO_PI_SQ * (k1 * k1 + k2 * k2 + k12 * k12)
                if tilde:
                    kadd(p1 * p2 * p12 * p12 / denom, &sb, &cb)
                    kadd(-k12 * p1 * p1 * p2 * p12 / (denom * k1), &sd, &cd)
                else:
                    kadd(p1 * p2 / denom, &sb, &cb)
                    kadd(-k12 * p1 * p2 / (denom * k1), &sd, &cd)
    return sb, sd


def i1_sum(double[::1] phi2, int kmax):
    cdef double s = 0.0, c = 0.0
    cdef double p1
    cdef int k1, k2
    with nogil:
        for k1 in range(-kmax, kmax + 1):
            if k1 == 0:
                continue
            p1 = phi2[abs(k1)]
            for k2 in range(-kmax, kmax + 1):
                if k2 == 0:
                    continue
                kadd(-p1 * phi2[abs(k2)] / (TWO_PI_SQ * k1 * k2), &s, &c)
    return s


def i2_sum(double[::1] phi2, int kmax):
    cdef double s = 0.0, c = 0.0
    cdef double p
    cdef int k
    with nogil:
        for k in range(-kmax, kmax + 1):
            if k == 0:
                continue
            p = phi2[abs(k)]
            kadd(-p * p / (TWO_PI_SQ * k * k), &s, &c)
    return s


def weighted_mode_sum(double[::1] phi2, int kmax):
    cdef double s = 0.0, c = 0.0
    cdef int k
    with nogil:
        for k in range(-kmax, kmax + 1):
            kadd(phi2[abs(k)], &s, &c)
    return s
