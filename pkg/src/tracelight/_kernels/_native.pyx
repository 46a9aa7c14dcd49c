# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled FNV-1a kernel used on the hot ingestion path."""

from libc.stdint cimport uint64_t


def fnv1a_64(const unsigned char[::1] data) -> int:
    """64-bit FNV-1a over a byte buffer (wrapping uint64 arithmetic)."""
    cdef uint64_t h = <uint64_t>0xcbf29ce484222325
    cdef uint64_t prime = <uint64_t>0x100000001b3
    cdef Py_ssize_t i
    cdef Py_ssize_t n = data.shape[0]
    for i in range(n):
        h = (h ^ data[i]) * prime
    return h
