"""Hot numeric loops.

Each kernel exists twice: a loop version compiled with numba and a vectorised
numpy version. The public dispatchers pick the numba path when numba is
importable and ``FPA_DISABLE_NUMBA`` is unset; both paths are public so the
tests and the benchmark can run them side by side.

Permanents are computed modulo word-sized primes and recombined by CRT in
Python integers, so the result is exact at every order the guard allows.
"""

import numpy as np

from ._accel import HAS_NUMBA, njit

# Primes below 2**31: a product of two residues stays inside int64.
CRT_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
              2147483549, 2147483543, 2147483497, 2147483489, 2147483477)

_NUMPY_CHUNK = 1 << 14


# ---------------------------------------------------------------- Ryser

@njit(cache=True)
def ryser_mod_numba(A, primes):
    """Ryser's formula with Gray-code column updates, reduced mod each prime.

    Row sums are kept as exact small integers; only the row-sum products are
    reduced. Returns one residue per prime.
    """
    n = A.shape[0]
    npr = primes.shape[0]
    acc = np.zeros(npr, dtype=np.int64)
    rowsum = np.zeros(n, dtype=np.int64)
    in_set = np.zeros(n, dtype=np.int64)
    size = 0
    total = np.int64(1) << n
    for g in range(1, total):
        # flip the lowest set bit position of g
        col = 0
        while not (g >> col) & 1:
            col += 1
        if in_set[col]:
            in_set[col] = 0
            size -= 1
            for r in range(n):
                rowsum[r] -= A[r, col]
        else:
            in_set[col] = 1
            size += 1
            for r in range(n):
                rowsum[r] += A[r, col]
        negative = (n - size) & 1
        for t in range(npr):
            p = primes[t]
            prod = np.int64(1)
            for r in range(n):
                prod = (prod * (rowsum[r] % p)) % p
                if prod == 0:
                    break
            if negative:
                acc[t] = (acc[t] - prod) % p
            else:
                acc[t] = (acc[t] + prod) % p
    return acc


def ryser_mod_numpy(A, primes):
    """Vectorised Ryser over blocks of column subsets (no Gray code)."""
    A = np.asarray(A, dtype=np.int64)
    primes = np.asarray(primes, dtype=np.int64)
    n = A.shape[0]
    acc = np.zeros(primes.shape[0], dtype=np.int64)
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    for start in range(1, total, _NUMPY_CHUNK):
        subsets = np.arange(start, min(start + _NUMPY_CHUNK, total), dtype=np.int64)
        bits = (subsets[:, None] >> shifts) & 1
        rowsums = bits @ A.T
        negative = ((n - bits.sum(axis=1)) & 1).astype(bool)
        for t, p in enumerate(primes):
            prod = np.ones(subsets.shape[0], dtype=np.int64)
            for r in range(n):
                prod = (prod * (rowsums[:, r] % p)) % p
            pos = int(prod[~negative].sum() % p)
            neg = int(prod[negative].sum() % p)
            acc[t] = (acc[t] + pos - neg) % p
    return acc


def ryser_mod(A, primes):
    A = np.ascontiguousarray(A, dtype=np.int64)
    primes = np.ascontiguousarray(primes, dtype=np.int64)
    if HAS_NUMBA:
        return ryser_mod_numba(A, primes)
    return ryser_mod_numpy(A, primes)


# ------------------------------------------------------ word enumeration

@njit(cache=True)
def multiset_words_numba(first, count):
    """Fill ``count`` rows with successive lexicographic permutations of ``first``."""
    n = first.shape[0]
    out = np.empty((count, n), dtype=np.int64)
    cur = first.copy()
    for row in range(count):
        for c in range(n):
            out[row, c] = cur[c]
        # next permutation
        i = n - 2
        while i >= 0 and cur[i] >= cur[i + 1]:
            i -= 1
        if i < 0:
            break
        j = n - 1
        while cur[j] <= cur[i]:
            j -= 1
        tmp = cur[i]
        cur[i] = cur[j]
        cur[j] = tmp
        lo = i + 1
        hi = n - 1
        while lo < hi:
            tmp = cur[lo]
            cur[lo] = cur[hi]
            cur[hi] = tmp
            lo += 1
            hi -= 1
    return out


def multiset_words_numpy(lam, m):
    """Lexicographic S_n^lam built symbol by symbol.

    Words over symbols 1..v-1 are grown by choosing which ``lam`` positions
    take symbol v; the result is sorted once at the end.
    """
    from itertools import combinations

    words = np.ones((1, lam), dtype=np.int64)
    for v in range(2, m + 1):
        length = words.shape[1] + lam
        slots = np.array(list(combinations(range(length), lam)), dtype=np.int64)
        rest = np.ones((slots.shape[0], length), dtype=bool)
        rest[np.arange(slots.shape[0])[:, None], slots] = False
        rest_idx = np.nonzero(rest)[1].reshape(slots.shape[0], -1)
        grown = np.full((words.shape[0], slots.shape[0], length), v, dtype=np.int64)
        for s in range(slots.shape[0]):
            grown[:, s, rest_idx[s]] = words
        words = grown.reshape(-1, length)
    order = np.lexsort(words.T[::-1])
    return words[order]


def multiset_words(lam, m, count):
    if HAS_NUMBA:
        first = np.repeat(np.arange(1, m + 1, dtype=np.int64), lam)
        return multiset_words_numba(first, count)
    return multiset_words_numpy(lam, m)


# ------------------------------------------------------- ball counting

@njit(cache=True)
def count_within_numba(words, center, radius):
    total = 0
    n = words.shape[1]
    for row in range(words.shape[0]):
        ok = True
        for c in range(n):
            diff = words[row, c] - center[c]
            if diff > radius or -diff > radius:
                ok = False
                break
        if ok:
            total += 1
    return total


def count_within_numpy(words, center, radius):
    return int(np.count_nonzero(np.abs(words - center).max(axis=1) <= radius))


def count_within(words, center, radius):
    words = np.ascontiguousarray(words, dtype=np.int64)
    center = np.ascontiguousarray(center, dtype=np.int64)
    if HAS_NUMBA:
        return int(count_within_numba(words, center, radius))
    return count_within_numpy(words, center, radius)


# ------------------------------------------------------------- greedy

@njit(cache=True)
def greedy_select_numba(words, d):
    """Accept each word, in row order, iff it is at distance >= d from all accepted."""
    N, n = words.shape
    chosen = np.empty(N, dtype=np.int64)
    nchosen = 0
    for row in range(N):
        keep = True
        for t in range(nchosen):
            c = chosen[t]
            far = False
            for col in range(n):
                diff = words[row, col] - words[c, col]
                if diff >= d or -diff >= d:
                    far = True
                    break
            if not far:
                keep = False
                break
        if keep:
            chosen[nchosen] = row
            nchosen += 1
    return chosen[:nchosen]


def greedy_select_numpy(words, d):
    """Pick the first live row, drop every row within d-1 of it, repeat."""
    words = np.asarray(words, dtype=np.int64)
    alive = np.ones(words.shape[0], dtype=bool)
    chosen = []
    start = 0
    while True:
        live = np.flatnonzero(alive[start:])
        if live.size == 0:
            break
        row = start + int(live[0])
        chosen.append(row)
        tail = words[row:]
        close = np.abs(tail - words[row]).max(axis=1) <= d - 1
        alive[row:][close] = False
        start = row + 1
    return np.array(chosen, dtype=np.int64)


def greedy_select(words, d):
    words = np.ascontiguousarray(words, dtype=np.int64)
    if d <= 1:
        # radius-0 balls hold only their centre; every distinct word survives
        return np.arange(words.shape[0], dtype=np.int64)
    if HAS_NUMBA:
        return greedy_select_numba(words, d)
    return greedy_select_numpy(words, d)
