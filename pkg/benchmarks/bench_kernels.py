"""Time the numba kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--repeat 3]

Numba timings exclude compilation (each kernel is warmed up once). Every
pair of results is checked for equality before timing is reported.
"""

import argparse
import time

import numpy as np

from fpa import kernels
from fpa._accel import HAS_NUMBA
from fpa.combinatorics import build_matrix
from fpa.core import identity_perm, words_array


def best_of(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def cases():
    primes = np.array(kernels.CRT_PRIMES[:3], dtype=np.int64)
    for lam, n, d in [(1, 12, 2), (2, 16, 2), (2, 18, 3)]:
        A = build_matrix(lam, n, d)
        yield (f"ryser A({lam},{n},{d})",
               lambda A=A: kernels.ryser_mod_numba(A, primes),
               lambda A=A: kernels.ryser_mod_numpy(A, primes))
    for lam, m in [(1, 8), (2, 5)]:
        size = len(words_array(lam, m))
        first = np.repeat(np.arange(1, m + 1), lam)
        yield (f"enumerate S({lam},{m})",
               lambda first=first, size=size: kernels.multiset_words_numba(first, size),
               lambda lam=lam, m=m: kernels.multiset_words_numpy(lam, m))
    W = words_array(2, 5)
    c = np.array(identity_perm(2, 5))
    yield ("ball count S(2,5) d=2",
           lambda: kernels.count_within_numba(W, c, 2),
           lambda: kernels.count_within_numpy(W, c, 2))
    for lam, m, d in [(1, 8, 3), (2, 4, 2)]:
        W2 = words_array(lam, m)
        yield (f"greedy S({lam},{m}) d={d}",
               lambda W2=W2, d=d: kernels.greedy_select_numba(W2, d),
               lambda W2=W2, d=d: kernels.greedy_select_numpy(W2, d))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not HAS_NUMBA:
        print("numba disabled; the 'numba' column times the uncompiled Python loops")
    print(f"{'kernel':28s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fast, slow in cases():
        fast()  # compile
        t_fast, r_fast = best_of(fast, args.repeat)
        t_slow, r_slow = best_of(slow, args.repeat)
        if not np.array_equal(np.asarray(r_fast), np.asarray(r_slow)):
            raise SystemExit(f"{name}: numba and numpy results differ")
        print(f"{name:28s} {t_fast:10.4f} {t_slow:10.4f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
