"""Compare the numba kernels with the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths must return identical arrays; the script exits 1 if they differ.
"""
import argparse
import sys
import time

import numpy as np

from skewcapelli import _kernels


def complete(m):
    return ~np.eye(m, dtype=bool)


def best_of(fn, repeat):
    fn()  # warm-up (numba compiles on first call)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    masks12 = np.arange(1 << 12, dtype=np.int64)
    evens = masks12[np.array([bin(v).count("1") % 2 == 0 for v in masks12])]
    two = masks12[np.array([bin(v).count("1") == 2 for v in masks12])]
    yield "perfect_matchings K12", lambda acc: _kernels.perfect_matchings(complete(12), accelerated=acc)
    yield "perfect_matchings K14", lambda acc: _kernels.perfect_matchings(complete(14), accelerated=acc)
    yield "pair_sequences K8", lambda acc: _kernels.pair_sequences(complete(8), accelerated=acc)
    yield "wedge_signs even x 2-sets (12 bits)", lambda acc: _kernels.wedge_signs(evens, two, accelerated=acc)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if not _kernels._HAVE_NUMBA:
        print("numba is not installed; only the numpy path can run")
        return 0
    print(f"{'kernel':<38} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    status = 0
    for name, fn in cases():
        a, b = fn(False), fn(True)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        if not same:
            status = 1
        t_np = best_of(lambda: fn(False), args.repeat)
        t_nb = best_of(lambda: fn(True), args.repeat)
        flag = "" if same else "  MISMATCH"
        print(f"{name:<38} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>7.1f}x{flag}")
    return status


if __name__ == "__main__":
    sys.exit(main())
