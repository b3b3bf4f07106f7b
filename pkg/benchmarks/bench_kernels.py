"""Time the numba kernels against the pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both paths are loaded in one process (the env flag only picks the default),
outputs are compared for equality, and best-of-N wall times are printed.
"""
import argparse
import time

import numpy as np

from grlab import _kernels
from grlab.presets import preset


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_convolve(repeat):
    rng = np.random.default_rng(0)
    for name in ("S3", "S4", "SL(2,3)"):
        G = preset(name)
        m = 2 ** 6
        pairs = [(rng.integers(0, m, G.order), rng.integers(0, m, G.order)) for _ in range(200)]

        def run(f):
            return [f(G.table, a, b, m) for a, b in pairs]

        assert all(np.array_equal(x, y) for x, y in zip(run(_kernels.convolve_np),
                                                          run(_kernels.convolve_nb)))
        t_np = best_of(lambda: run(_kernels.convolve_np), repeat)
        t_nb = best_of(lambda: run(_kernels.convolve_nb), repeat)
        print(f"convolve {name:<8} x200   numpy {t_np * 1e3:8.2f} ms   numba {t_nb * 1e3:8.2f} ms"
              f"   speedup {t_np / t_nb:5.1f}x")


def bench_snf(repeat):
    rng = np.random.default_rng(1)
    for n in (12, 24, 48):
        p, k = 2, 6
        m = p ** k
        mats = [rng.integers(0, m, (n, n)) * (p ** rng.integers(0, 2, (n, 1))) % m
                for _ in range(20)]

        def run(f):
            return [f(np.ascontiguousarray(M, dtype=np.int64), p, k, m) for M in mats]

        for r_np, r_nb in zip(run(_kernels.snf_np), run(_kernels.snf_nb)):
            assert all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(r_np, r_nb))
        t_np = best_of(lambda: run(_kernels.snf_np), repeat)
        t_nb = best_of(lambda: run(_kernels.snf_nb), repeat)
        print(f"smith    {n:>2}x{n:<2}    x20    numpy {t_np * 1e3:8.2f} ms   numba {t_nb * 1e3:8.2f} ms"
              f"   speedup {t_np / t_nb:5.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.convolve_nb is None:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"default path: {'numba' if _kernels.USE_NUMBA else 'numpy'}")
    bench_convolve(args.repeat)
    bench_snf(args.repeat)


if __name__ == "__main__":
    main()
