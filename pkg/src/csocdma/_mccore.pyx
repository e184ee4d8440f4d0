# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernel.

Arithmetic mirrors _mcpure.count_errors exactly: SplitMix64 counter stream,
Box-Muller noise, threshold decision.  Kept free of the numpy C API so the
build needs nothing beyond a C compiler.
"""
from libc.math cimport sqrt, log, cos
from libc.stdint cimport uint64_t, int64_t

cdef double TWO_PI = 6.283185307179586476925287
cdef double TWO_NEG53 = 1.0 / 9007199254740992.0
cdef uint64_t GAMMA = 0x9E3779B97F4A7C15UL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9UL
cdef uint64_t MIX2 = 0x94D049BB133111EBUL


cdef inline uint64_t stream_value(uint64_t key, uint64_t pos) noexcept nogil:
    cdef uint64_t z = key + (pos + 1UL) * GAMMA
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double unit_open(uint64_t x) noexcept nogil:
    return (<double>(x >> 11) + 1.0) * TWO_NEG53


def count_errors(int64_t n_bits, uint64_t key, double[::1] contrib,
                 Py_ssize_t target, double threshold, double sigma,
                 int force_non_target):
    """Errors over n_bits slots; force_non_target is -1 (random) or 0/1."""
    cdef Py_ssize_t k_users = contrib.shape[0]
    cdef Py_ssize_t words_per_slot = (k_users + 63) // 64
    cdef uint64_t dps = <uint64_t>(words_per_slot + 2)
    cdef Py_ssize_t target_word = target >> 6
    cdef int target_shift = <int>(target & 63)
    cdef double target_contrib = contrib[target]
    cdef double interferer_sum = 0.0
    cdef int64_t errors = 0
    cdef int64_t s
    cdef uint64_t base, word
    cdef Py_ssize_t widx, k, lo, hi
    cdef double current, u1, u2, noise
    cdef bint target_bit, decided

    for k in range(k_users):
        if k != target:
            interferer_sum += contrib[k]

    with nogil:
        for s in range(n_bits):
            base = (<uint64_t>s) * dps
            word = stream_value(key, base + <uint64_t>target_word)
            target_bit = (word >> target_shift) & 1UL
            if force_non_target >= 0:
                current = interferer_sum * force_non_target
                if target_bit:
                    current += target_contrib
            else:
                current = 0.0
                for widx in range(words_per_slot):
                    if widx != target_word:
                        word = stream_value(key, base + <uint64_t>widx)
                    else:
                        word = stream_value(key, base + <uint64_t>target_word)
                    lo = widx * 64
                    hi = lo + 64
                    if hi > k_users:
                        hi = k_users
                    for k in range(lo, hi):
                        if (word >> (k - lo)) & 1UL:
                            current += contrib[k]
            u1 = unit_open(stream_value(key, base + <uint64_t>words_per_slot))
            u2 = unit_open(stream_value(key, base + <uint64_t>(words_per_slot + 1)))
            noise = sigma * sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2)
            decided = (current + noise) > threshold
            if decided != target_bit:
                errors += 1
    return errors
