# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled theta kernels (hot path).

Algorithmically identical to ellq._kernels_py: normalize the argument into
[sqrt(p), 1/sqrt(p)) with the quasi-periodicity law, then take the truncated
product. Kept in lockstep with the pure twin; the benchmark in
benchmarks/bench_kernels.py compares the two.
"""

from libc.math cimport log, round as c_round

cdef extern from "complex.h":
    double cabs(double complex)
    double complex cexp(double complex)
    double complex cpow(double complex, double complex)


cdef inline double complex _theta(double complex z, double p, int jmax):
    cdef double s_f = c_round(log(cabs(z)) / log(p))
    cdef int s = <int>s_f
    cdef double complex val = 1.0
    cdef double complex zi
    cdef double pj = 1.0
    cdef int j
    if s != 0:
        z = z * cpow(p, -s_f)
    zi = 1.0 / z
    for j in range(jmax + 1):
        val = val * (1.0 - z * pj) * (1.0 - p * pj * zi)
        pj = pj * p
    if s != 0:
        val = val * cpow(-1.0, s_f) * cpow(p, -0.5 * s_f * (s_f - 1.0)) * cpow(z, -s_f)
    return val


def theta(double complex z, double p, int jmax):
    return _theta(z, p, jmax)


def e_func(double complex s, double p, double q, int jmax):
    cdef double lq = log(q)
    return cexp(s * lq) * _theta(cexp(-2.0 * s * lq), p, jmax)


def alpha(double complex l, double complex z, double p, double q, int jmax):
    cdef double lq = log(q)
    cdef double complex q2l = cexp(2.0 * l * lq)
    return (_theta(z, p, jmax) * _theta(q * q * q2l, p, jmax)
            / (_theta(q * q * z, p, jmax) * _theta(q2l, p, jmax)))


def beta(double complex l, double complex z, double p, double q, int jmax):
    cdef double lq = log(q)
    cdef double complex qm2l = cexp(-2.0 * l * lq)
    return (_theta(q * q, p, jmax) * _theta(qm2l * z, p, jmax)
            / (_theta(q * q * z, p, jmax) * _theta(qm2l, p, jmax)))


def alpha_tilde(double complex l, double complex z, double p, double q, int jmax):
    cdef double lq = log(q)
    cdef double complex q2l = cexp(2.0 * l * lq)
    return _theta(z, p, jmax) * _theta(q * q * q2l, p, jmax) / _theta(q2l, p, jmax)


def beta_tilde(double complex l, double complex z, double p, double q, int jmax):
    cdef double lq = log(q)
    cdef double complex qm2l = cexp(-2.0 * l * lq)
    return _theta(q * q, p, jmax) * _theta(qm2l * z, p, jmax) / _theta(qm2l, p, jmax)
