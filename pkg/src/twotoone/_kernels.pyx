# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Signatures and results match ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport calloc, free
from libc.stdint cimport int64_t

cnp.import_array()


def fwht(cnp.ndarray[int64_t, ndim=1] a not None):
    """In-place unnormalized Walsh-Hadamard transform; returns ``a``."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef int64_t x, y
    cdef int64_t[::1] v = a
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                x = v[j]
                y = v[j + h]
                v[j] = x + y
                v[j + h] = x - y
            i += 2 * h
        h *= 2
    return a


def fwht_rows(cnp.ndarray[int64_t, ndim=2] a not None):
    """In-place transform of every row; returns ``a``."""
    cdef Py_ssize_t rows = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r, h, i, j
    cdef int64_t x, y
    cdef int64_t[:, ::1] v = a
    if n & (n - 1):
        raise ValueError("row length must be a power of two")
    for r in range(rows):
        h = 1
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    x = v[r, j]
                    y = v[r, j + h]
                    v[r, j] = x + y
                    v[r, j + h] = x - y
                i += 2 * h
            h *= 2
    return a


def two_to_one_rows(cnp.ndarray[int64_t, ndim=2] values not None, Py_ssize_t codomain_size):
    """Row-wise 2-to-1 predicate for a batch of value tables."""
    cdef Py_ssize_t rows = values.shape[0], dom = values.shape[1]
    cdef Py_ssize_t r, i, b
    cdef int64_t c
    cdef int n1, nbig
    cdef int64_t[:, ::1] v = values
    cdef int64_t* counts = <int64_t*> calloc(codomain_size, sizeof(int64_t))
    out = np.zeros(rows, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    if counts == NULL:
        raise MemoryError()
    try:
        for r in range(rows):
            for b in range(codomain_size):
                counts[b] = 0
            for i in range(dom):
                c = v[r, i]
                if c < 0 or c >= codomain_size:
                    raise ValueError("value outside codomain")
                counts[c] += 1
            n1 = 0
            nbig = 0
            for b in range(codomain_size):
                if counts[b] == 1:
                    n1 += 1
                elif counts[b] > 2:
                    nbig += 1
            if dom % 2 == 0:
                o[r] = (n1 == 0 and nbig == 0)
            else:
                o[r] = (n1 == 1 and nbig == 0)
    finally:
        free(counts)
    return out


cdef inline void _classify(int64_t c, int* n1, int* nbig, int sign) noexcept nogil:
    if c == 1:
        n1[0] += sign
    elif c > 2:
        nbig[0] += sign


def count_two_to_one_maps(Py_ssize_t domain_size, Py_ssize_t codomain_size):
    """Count 2-to-1 maps between sets of the given sizes by enumerating all of them."""
    cdef Py_ssize_t D = domain_size, C = codomain_size
    cdef int64_t* digits
    cdef int64_t* counts
    cdef int n1 = 0, nbig = 0
    cdef Py_ssize_t pos
    cdef int64_t old, new
    cdef unsigned long long total = 0
    cdef bint even = (D % 2 == 0)
    if D < 1 or C < 1:
        return 0
    digits = <int64_t*> calloc(D, sizeof(int64_t))
    counts = <int64_t*> calloc(C, sizeof(int64_t))
    if digits == NULL or counts == NULL:
        free(digits)
        free(counts)
        raise MemoryError()
    counts[0] = D
    _classify(D, &n1, &nbig, 1)
    with nogil:
        while True:
            if nbig == 0 and ((even and n1 == 0) or (not even and n1 == 1)):
                total += 1
            # odometer step on the last position
            pos = D - 1
            while pos >= 0:
                old = digits[pos]
                _classify(counts[old], &n1, &nbig, -1)
                counts[old] -= 1
                _classify(counts[old], &n1, &nbig, 1)
                new = old + 1
                if new == C:
                    new = 0
                _classify(counts[new], &n1, &nbig, -1)
                counts[new] += 1
                _classify(counts[new], &n1, &nbig, 1)
                digits[pos] = new
                if new != 0:
                    break
                pos -= 1
            if pos < 0:
                break
    free(digits)
    free(counts)
    return int(total)


def walsh_triple_sum(cnp.ndarray[int64_t, ndim=1] w not None):
    """Sum over (v1, v2) of w[v1] * w[v2] * w[v1 ^ v2]."""
    cdef Py_ssize_t n = w.shape[0], i, j
    cdef int64_t[::1] v = w
    cdef int64_t acc = 0, row
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    if n > (1 << 12):
        raise OverflowError("direct triple sum is limited to n <= 12")
    with nogil:
        for i in range(n):
            if v[i] == 0:
                continue
            row = 0
            for j in range(n):
                row += v[j] * v[i ^ j]
            acc += v[i] * row
    return int(acc)
