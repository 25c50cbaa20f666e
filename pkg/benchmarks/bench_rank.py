"""Compare the numba and pure-numpy mod-p rank kernels.

    python3 benchmarks/bench_rank.py [--sizes 50 100 200] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from gentle_ext import _kernels

P = 1_000_003


def _time(fn, a, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        r = fn(a, P)
        best = min(best, time.perf_counter() - t0)
    return best, r


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    if _kernels.rank_mod_p_numba is None:
        print("numba not installed; only the numpy kernel is timed")
    else:
        _kernels.rank_mod_p_numba(np.eye(2, dtype=np.int64), P)  # compile outside the timings
    print(f"{'n':>6} {'rank':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in args.sizes:
        # rank-deficient on purpose: last quarter of rows are combinations of the others
        a = rng.integers(0, P, size=(n, n), dtype=np.int64)
        k = n - n // 4
        a[k:] = (rng.integers(0, 5, size=(n - k, k)) @ a[:k]) % P
        t_np, r_np = _time(_kernels.rank_mod_p_numpy, a, args.repeat)
        if _kernels.rank_mod_p_numba is None:
            print(f"{n:>6} {r_np:>6} {t_np:>10.4f} {'-':>10} {'-':>8}")
            continue
        t_nb, r_nb = _time(_kernels.rank_mod_p_numba, a, args.repeat)
        if r_np != r_nb:
            raise SystemExit(f"kernels disagree at n={n}: {r_np} vs {r_nb}")
        print(f"{n:>6} {r_np:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
