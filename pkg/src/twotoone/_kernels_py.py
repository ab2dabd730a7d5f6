"""Pure numpy implementations of the hot loops (fallback for ``_kernels``)."""

import numpy as np


def fwht(a):
    """In-place unnormalized Walsh-Hadamard transform; returns ``a``."""
    n = a.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = x - v[:, 1, :]
        h *= 2
    return a


def fwht_rows(a):
    rows, n = a.shape
    if n & (n - 1):
        raise ValueError("row length must be a power of two")
    h = 1
    while h < n:
        v = a.reshape(rows, -1, 2, h)
        x = v[:, :, 0, :].copy()
        v[:, :, 0, :] += v[:, :, 1, :]
        v[:, :, 1, :] = x - v[:, :, 1, :]
        h *= 2
    return a


def _fiber_counts(values, codomain_size):
    rows, _ = values.shape
    if values.size and (values.min() < 0 or values.max() >= codomain_size):
        raise ValueError("value outside codomain")
    flat = values + (np.arange(rows, dtype=np.int64) * codomain_size)[:, None]
    return np.bincount(flat.ravel(), minlength=rows * codomain_size).reshape(rows, codomain_size)


def _two_to_one_from_counts(counts, dom):
    n1 = np.count_nonzero(counts == 1, axis=1)
    nbig = np.count_nonzero(counts > 2, axis=1)
    want = 0 if dom % 2 == 0 else 1
    return ((n1 == want) & (nbig == 0)).astype(np.uint8)


def two_to_one_rows(values, codomain_size):
    """Row-wise 2-to-1 predicate for a batch of value tables."""
    return _two_to_one_from_counts(_fiber_counts(values, codomain_size), values.shape[1])


def count_two_to_one_maps(domain_size, codomain_size, chunk=1 << 18):
    """Count 2-to-1 maps between sets of the given sizes by enumerating all of them."""
    D, C = domain_size, codomain_size
    if D < 1 or C < 1:
        return 0
    total_maps = C ** D
    total = 0
    start = 0
    while start < total_maps:
        stop = min(start + chunk, total_maps)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((stop - start, D), dtype=np.int64)
        for pos in range(D - 1, -1, -1):
            idx, digits[:, pos] = np.divmod(idx, C)
        counts = np.stack([(digits == b).sum(axis=1) for b in range(C)], axis=1)
        total += int(_two_to_one_from_counts(counts, D).sum())
        start = stop
    return total


def walsh_triple_sum(w, block=256):
    """Sum over (v1, v2) of w[v1] * w[v2] * w[v1 ^ v2]."""
    n = w.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    if n > (1 << 12):
        raise OverflowError("direct triple sum is limited to n <= 12")
    idx = np.arange(n, dtype=np.int64)
    acc = 0
    for s in range(0, n, block):
        b = idx[s:s + block]
        acc += int((w[b, None] * w[None, :] * w[b[:, None] ^ idx[None, :]]).sum())
    return acc
