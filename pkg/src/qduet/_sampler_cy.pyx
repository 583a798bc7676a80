# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython shot-sampling kernel; bit-identical to qduet._sampler_py."""

from libc.stdint cimport uint64_t

from cpython.bytes cimport PyBytes_FromStringAndSize, PyBytes_AS_STRING

cdef double TWO_NEG64 = 1.0 / 18446744073709551616.0  # 2**-64, exact


def sample_outcomes(state, double p0, double p1, double p2, Py_ssize_t n):
    """Draw n outcomes in {0..3}; returns (advanced rng state, outcome bytes)."""
    cdef uint64_t s = <uint64_t> state
    cdef uint64_t z
    cdef double u
    cdef double c0 = p0
    cdef double c1 = c0 + p1
    cdef double c2 = c1 + p2
    cdef bytes out = PyBytes_FromStringAndSize(NULL, n)
    cdef char* buf = PyBytes_AS_STRING(out)
    cdef Py_ssize_t i
    for i in range(n):
        s += <uint64_t> 0x9E3779B97F4A7C15
        z = s
        z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
        z = z ^ (z >> 31)
        u = (<double> z) * TWO_NEG64
        buf[i] = 0 if u < c0 else 1 if u < c1 else 2 if u < c2 else 3
    return int(s), out
