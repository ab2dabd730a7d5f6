"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run on identical inputs under both backends; results are
checked for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from twotoone import _kernels_py as py
from twotoone.kernels import compiled_backend


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng):
    a = rng.integers(-4, 5, 1 << 16).astype(np.int64)
    rows = rng.integers(-4, 5, (256, 1 << 8)).astype(np.int64)
    maps = rng.integers(0, 16, (20000, 16)).astype(np.int64)
    w = rng.integers(-16, 17, 1 << 10).astype(np.int64)
    return [
        ("fwht 2^16", lambda k: k.fwht(a.copy())),
        ("fwht_rows 256x2^8", lambda k: k.fwht_rows(rows.copy())),
        ("two_to_one_rows 20000x16", lambda k: k.two_to_one_rows(maps, 16)),
        ("count_two_to_one_maps 8->8", lambda k: k.count_two_to_one_maps(8, 8)),
        ("walsh_triple_sum 2^10", lambda k: k.walsh_triple_sum(w)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if compiled_backend is None:
        print("compiled backend unavailable; only the numpy backend is timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'python (s)':>12s} {'cython (s)':>12s} {'speedup':>8s}")
    for name, run in cases(rng):
        t_py, r_py = _best(lambda: run(py), args.repeat)
        if compiled_backend is None:
            print(f"{name:32s} {t_py:12.5f} {'-':>12s} {'-':>8s}")
            continue
        t_c, r_c = _best(lambda: run(compiled_backend), args.repeat)
        if not np.array_equal(np.asarray(r_py), np.asarray(r_c)):
            raise SystemExit(f"backend mismatch on {name}")
        print(f"{name:32s} {t_py:12.5f} {t_c:12.5f} {t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
