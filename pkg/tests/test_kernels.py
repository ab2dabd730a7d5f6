import numpy as np
import pytest

from twotoone import _kernels_py as py
from twotoone import kernels

compiled = kernels.compiled_backend
backends = [py] + ([compiled] if compiled is not None else [])


def _fwht_reference(a):
    n = len(a)
    H = np.array([[(-1) ** bin(i & j).count("1") for j in range(n)] for i in range(n)])
    return H @ np.asarray(a)


@pytest.mark.parametrize("impl", backends, ids=lambda m: m.__name__)
def test_fwht(impl, rng):
    for n in (1, 2, 8, 64):
        a = rng.integers(-5, 5, n).astype(np.int64)
        assert np.array_equal(impl.fwht(a.copy()), _fwht_reference(a))
        rows = rng.integers(-5, 5, (3, n)).astype(np.int64)
        want = np.array([_fwht_reference(r) for r in rows])
        assert np.array_equal(impl.fwht_rows(rows.copy()), want)


@pytest.mark.parametrize("impl", backends, ids=lambda m: m.__name__)
def test_fwht_rejects_bad_length(impl):
    with pytest.raises(ValueError):
        impl.fwht(np.zeros(6, dtype=np.int64))


@pytest.mark.parametrize("impl", backends, ids=lambda m: m.__name__)
def test_triple_sum(impl, rng):
    for n in (1, 4, 32, 256):
        w = rng.integers(-9, 9, n).astype(np.int64)
        want = sum(int(w[i]) * int(w[j]) * int(w[i ^ j]) for i in range(n) for j in range(n))
        assert impl.walsh_triple_sum(w) == want


@pytest.mark.parametrize("impl", backends, ids=lambda m: m.__name__)
def test_counting(impl):
    assert impl.count_two_to_one_maps(2, 2) == 2
    assert impl.count_two_to_one_maps(4, 4) == 36
    assert impl.count_two_to_one_maps(3, 3) == 18  # 3 pairs x 3 images x 2 singletons


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
def test_backends_agree(rng):
    vals = rng.integers(0, 16, (400, 16)).astype(np.int64)
    vals[::4] = np.repeat(np.arange(8), 2)
    assert np.array_equal(py.two_to_one_rows(vals, 16).astype(bool),
                          compiled.two_to_one_rows(vals, 16).astype(bool))
    assert py.count_two_to_one_maps(5, 4) == compiled.count_two_to_one_maps(5, 4)
    w = rng.integers(-100, 100, 1024).astype(np.int64)
    assert py.walsh_triple_sum(w) == compiled.walsh_triple_sum(w)


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
