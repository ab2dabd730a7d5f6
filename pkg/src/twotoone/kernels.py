"""Hot-loop backend selection.

The compiled extension ``_kernels`` is used when it imports; otherwise the
numpy versions in ``_kernels_py`` take over.  Setting the environment
variable ``TWOTOONE_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from . import _kernels_py as python_backend

try:
    if os.environ.get("TWOTOONE_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _kernels as compiled_backend
except ImportError:
    compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"


def fwht(a):
    """Walsh-Hadamard transform of an integer vector (returns a new int64 array)."""
    return _impl.fwht(np.array(a, dtype=np.int64))


def fwht_rows(a):
    return _impl.fwht_rows(np.array(a, dtype=np.int64, ndmin=2))


def two_to_one_rows(values, codomain_size):
    v = np.ascontiguousarray(values, dtype=np.int64)
    return _impl.two_to_one_rows(v, int(codomain_size)).astype(bool)


def count_two_to_one_maps(domain_size, codomain_size):
    return _impl.count_two_to_one_maps(int(domain_size), int(codomain_size))


def walsh_triple_sum(w):
    return _impl.walsh_triple_sum(np.ascontiguousarray(w, dtype=np.int64))
