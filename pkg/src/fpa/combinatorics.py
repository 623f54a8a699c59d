"""Ball volumes, permanents and code-size bounds for (lam, n, d)-FPAs.

The number of words within l-infinity distance d of a fixed word is
V(lam, n, d) = per A / (lam!)^m, where A is the 0/1 band matrix with
a_ij = 1 iff |ceil(i/lam) - ceil(j/lam)| <= d. Exact quantities use Python
integers and ``Fraction``; the asymptotic bounds are returned as natural logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional

import numpy as np

from . import kernels
from .core import DEFAULT_WORD_CAP, FreqPerm, identity_perm, space_size, words_array
from .errors import NonDivisible, OrderTooLarge, ParameterError

NAIVE_MAX_ORDER = 10
RYSER_MAX_ORDER = 28
DEFAULT_EXACT_CAP = 20


def _check_lnd(lam: int, n: int, d: int) -> int:
    if lam < 1 or n < 1 or n % lam:
        raise ParameterError(f"need lambda | n with both positive (lambda={lam}, n={n})")
    if d < 0:
        raise ParameterError(f"d must be nonnegative, got {d}")
    return n // lam


def build_matrix(lam: int, n: int, d: int) -> np.ndarray:
    """The symmetric 0/1 band matrix A^(lam, n, d) as an int64 array."""
    _check_lnd(lam, n, d)
    block = np.arange(n) // lam
    return (np.abs(block[:, None] - block[None, :]) <= d).astype(np.int64)


def band_row_sum(m: int, d: int, i: int) -> int:
    """Row sum of A^(1, m, d), row i (1-based).

    Equals d + i, 2d + 1 or m - i + 1 + d in the head, body and tail rows
    when 2d < m; the general form below also covers wider bands.
    """
    return min(i + d, m) - max(1, i - d) + 1


def _square(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"need a square matrix, got shape {A.shape}")
    return A


def permanent_naive(A) -> int:
    """Permanent by summing over all n! permutations. Reference oracle only."""
    A = _square(A)
    n = A.shape[0]
    if n > NAIVE_MAX_ORDER:
        raise OrderTooLarge(f"naive permanent limited to order {NAIVE_MAX_ORDER}, got {n}")
    rows = [[int(v) for v in row] for row in A]
    total = 0
    for perm in permutations(range(n)):
        prod = 1
        for r, c in enumerate(perm):
            prod *= rows[r][c]
            if not prod:
                break
        total += prod
    return total


def _crt(residues, primes) -> int:
    x, mod = 0, 1
    for r, p in zip(residues, primes):
        r, p = int(r), int(p)
        t = ((r - x) * pow(mod, -1, p)) % p
        x += mod * t
        mod *= p
    return x


def permanent_ryser(A, max_order: int = RYSER_MAX_ORDER) -> int:
    """Exact permanent of a nonnegative integer matrix by Ryser's formula.

    Evaluated modulo enough word-sized primes to exceed the product of the
    row sums (an upper bound on the permanent), then reconstructed by CRT.
    """
    A = _square(A)
    n = A.shape[0]
    if n > max_order:
        raise OrderTooLarge(f"Ryser permanent limited to order {max_order}, got {n}")
    if (A < 0).any():
        raise ParameterError("matrix entries must be nonnegative")
    if n == 0:
        return 1
    bound = 1
    for s in A.sum(axis=1):
        bound *= int(s)
    if bound == 0:
        return 0
    primes = []
    modulus = 1
    for p in kernels.CRT_PRIMES:
        primes.append(p)
        modulus *= p
        if modulus > bound:
            break
    else:
        raise OrderTooLarge("permanent bound exceeds the available CRT primes")
    residues = kernels.ryser_mod(A, np.array(primes, dtype=np.int64))
    return _crt(residues, primes)


def ball_size_exact(lam: int, n: int, d: int, max_order: int = RYSER_MAX_ORDER) -> int:
    """V(lam, n, d) = per A^(lam, n, d) / (lam!)^m."""
    m = _check_lnd(lam, n, d)
    per = permanent_ryser(build_matrix(lam, n, d), max_order=max_order)
    q, r = divmod(per, math.factorial(lam) ** m)
    if r:
        raise NonDivisible(f"per A^({lam},{n},{d}) = {per} not divisible by ({lam}!)^{m}")
    return q


def ball_size_bruteforce(lam: int, n: int, d: int, cap: int = DEFAULT_WORD_CAP) -> int:
    """Count words of S_n^lam within distance d of the identity by enumeration."""
    m = _check_lnd(lam, n, d)
    return kernels.count_within(words_array(lam, m, cap), np.array(identity_perm(lam, m)), d)


def _band_width(lam: int, n: int, d: int) -> tuple[int, bool]:
    w = 2 * d * lam + lam
    return (n, True) if w > n else (w, False)


def perm_bound_upper(lam: int, n: int, d: int) -> float:
    """log of [(2d lam + lam)!]^(n / (2d lam + lam)), row sums clamped at n."""
    _check_lnd(lam, n, d)
    w, _ = _band_width(lam, n, d)
    return n / w * math.lgamma(w + 1)


def perm_bound_lower(lam: int, n: int, d: int) -> float:
    """log of (2d lam + lam)^n / 2^(2d lam) * n!/n^n, row sums clamped at n."""
    _check_lnd(lam, n, d)
    w, _ = _band_width(lam, n, d)
    return n * math.log(w) - 2 * d * lam * math.log(2) + math.lgamma(n + 1) - n * math.log(n)


def bound_clamped(lam: int, n: int, d: int) -> bool:
    """True when 2d lam + lam > n and the permanent lemmas use width n instead."""
    return _band_width(lam, n, d)[1]


def gilbert_lower(lam: int, n: int, d: int, max_order: int = RYSER_MAX_ORDER) -> Fraction:
    """|S_n^lam| / V(lam, n, d-1); its ceiling is a guaranteed code size."""
    m = _check_lnd(lam, n, d)
    if d < 1:
        raise ParameterError("minimum distance must be at least 1")
    return Fraction(space_size(lam, m), ball_size_exact(lam, n, d - 1, max_order))


def packing_upper(lam: int, n: int, d: int, max_order: int = RYSER_MAX_ORDER) -> Fraction:
    """|S_n^lam| / V(lam, n, floor((d-1)/2)); its floor bounds every code."""
    m = _check_lnd(lam, n, d)
    if d < 1:
        raise ParameterError("minimum distance must be at least 1")
    return Fraction(space_size(lam, m), ball_size_exact(lam, n, (d - 1) // 2, max_order))


def asymptotic_bounds(lam: int, n: int, d: int) -> tuple[float, float]:
    """(log lower, log upper) on the maximum code size F(lam, n, d).

    lower = n! / [(2d lam - lam)!]^(n / (2d lam - lam))
    upper = 2^(2 lam h) n^n / (2 lam h + lam)^n,  h = floor((d-1)/2)
    Both band widths are clamped at n.
    """
    _check_lnd(lam, n, d)
    if d < 1:
        raise ParameterError("minimum distance must be at least 1")
    lower = math.lgamma(n + 1) - perm_bound_upper(lam, n, d - 1)
    upper = math.lgamma(n + 1) - perm_bound_lower(lam, n, (d - 1) // 2)
    return lower, upper


def greedy_construct(lam: int, n: int, d: int, cap: int = DEFAULT_WORD_CAP) -> list[FreqPerm]:
    """Greedy (lam, n, d)-FPA: repeatedly take the lexicographically least
    remaining word and discard everything within distance d - 1 of it."""
    m = _check_lnd(lam, n, d)
    if d < 1:
        raise ParameterError("minimum distance must be at least 1")
    words = words_array(lam, m, cap)
    rows = kernels.greedy_select(words, d)
    return [FreqPerm(int(s) for s in words[r]) for r in rows]


@dataclass(frozen=True)
class BoundsReport:
    lam: int
    m: int
    n: int
    d: int
    space: int
    ball_dminus1: Optional[int]
    ball_half: Optional[int]
    gilbert_lower: Optional[Fraction]
    packing_upper: Optional[Fraction]
    asym_lower_log: float
    asym_upper_log: float
    exact: bool
    clamped: bool

    @property
    def code_size_floor(self) -> Optional[int]:
        return None if self.gilbert_lower is None else math.ceil(self.gilbert_lower)

    @property
    def code_size_ceiling(self) -> Optional[int]:
        return None if self.packing_upper is None else math.floor(self.packing_upper)

    def to_dict(self) -> dict:
        def num(f):
            return None if f is None else f.numerator

        def den(f):
            return None if f is None else f.denominator

        return {
            "lambda": self.lam,
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "space": self.space,
            "ball_dminus1": self.ball_dminus1,
            "ball_half": self.ball_half,
            "gilbert_lower_num": num(self.gilbert_lower),
            "gilbert_lower_den": den(self.gilbert_lower),
            "packing_upper_num": num(self.packing_upper),
            "packing_upper_den": den(self.packing_upper),
            "asym_lower_log": self.asym_lower_log,
            "asym_upper_log": self.asym_upper_log,
            "exact": self.exact,
            "clamped": self.clamped,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundsReport":
        def frac(key):
            num, den = data[f"{key}_num"], data[f"{key}_den"]
            return None if num is None else Fraction(num, den)

        return cls(
            lam=data["lambda"], m=data["m"], n=data["n"], d=data["d"],
            space=data["space"], ball_dminus1=data["ball_dminus1"],
            ball_half=data["ball_half"], gilbert_lower=frac("gilbert_lower"),
            packing_upper=frac("packing_upper"),
            asym_lower_log=data["asym_lower_log"],
            asym_upper_log=data["asym_upper_log"], exact=data["exact"],
            clamped=data.get("clamped", False),
        )


def bounds_report(lam: int, m: int, d: int, exact_cap: int = DEFAULT_EXACT_CAP) -> BoundsReport:
    """Exact bounds when n <= exact_cap, otherwise only the log-space ones."""
    n = lam * m
    _check_lnd(lam, n, d)
    if d < 1:
        raise ParameterError("minimum distance must be at least 1")
    lower, upper = asymptotic_bounds(lam, n, d)
    clamped = bound_clamped(lam, n, d - 1) or bound_clamped(lam, n, (d - 1) // 2)
    space = space_size(lam, m)
    try:
        v_far = ball_size_exact(lam, n, d - 1, max_order=exact_cap)
        v_half = ball_size_exact(lam, n, (d - 1) // 2, max_order=exact_cap)
    except OrderTooLarge:
        return BoundsReport(lam, m, n, d, space, None, None, None, None,
                            lower, upper, False, clamped)
    return BoundsReport(lam, m, n, d, space, v_far, v_half,
                        Fraction(space, v_far), Fraction(space, v_half),
                        lower, upper, True, clamped)
