"""Parameters, words, messages and the l-infinity metric.

Symbols are 1-based integers in ``[1, m]``; every symbol appears exactly
``lam`` times in a word of length ``n = m * lam``. All ceilings are integer
ceilings, ``ceil_div(a, lam) == (a + lam - 1) // lam``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    CapExceeded,
    OutOfRangeSymbol,
    ParameterError,
    WrongLength,
    WrongMultiplicity,
)

DEFAULT_WORD_CAP = 10**7


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class CodeParams:
    """Parameters of the code C(lam, n, k).

    Use :meth:`create` rather than the constructor; it derives ``m`` and
    ``d`` and enforces ``n = m * lam`` and ``n >= k + lam``.
    """

    lam: int
    m: int
    n: int
    k: int
    d: int

    @classmethod
    def create(cls, lam: int, n: int, k: int) -> "CodeParams":
        if lam < 1 or n < 1:
            raise ParameterError(f"lambda and n must be positive (lambda={lam}, n={n})")
        if k < 0:
            raise ParameterError(f"k must be nonnegative (k={k})")
        if n % lam:
            raise ParameterError(f"n={n} is not a multiple of lambda={lam}")
        if n < k + lam:
            raise ParameterError(f"need n >= k + lambda, got n={n} < {k} + {lam}")
        return cls(lam=lam, m=n // lam, n=n, k=k, d=(n - k) // lam)

    def __post_init__(self):
        if (self.n != self.m * self.lam or self.n < self.k + self.lam
                or self.d != (self.n - self.k) // self.lam):
            raise ParameterError(f"inconsistent parameters {self}")

    @property
    def radius(self) -> int:
        """Unique-decoding radius floor((d-1)/2)."""
        return (self.d - 1) // 2


class FreqPerm(tuple):
    """A word of S_n^lam. Construct through :func:`validate_word`."""

    __slots__ = ()

    @property
    def lam(self) -> int:
        return self.count(1)

    @property
    def m(self) -> int:
        return max(self)

    def to_text(self) -> str:
        return format_word(self)


class Message(tuple):
    """k message bits, ``msg[0]`` is the first bit m_1."""

    __slots__ = ()

    def __new__(cls, bits: Iterable[int] = ()):
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ParameterError(f"message bits must be 0/1, got {bits}")
        return super().__new__(cls, bits)

    @classmethod
    def from_text(cls, text: str) -> "Message":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ParameterError(f"message must be a 0/1 string, got {text!r}")
        return cls(int(ch) for ch in text)

    def to_text(self) -> str:
        return "".join(str(b) for b in self)


def parse_word(text: str) -> tuple[int, ...]:
    """Parse ``"3,1,1,2,2,3"``; validation is left to :func:`validate_word`."""
    try:
        return tuple(int(tok) for tok in text.strip().split(",") if tok.strip())
    except ValueError as exc:
        raise ParameterError(f"cannot parse word {text!r}") from exc


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(int(s)) for s in word)


def validate_word(symbols: Sequence[int], lam: int, m: int) -> FreqPerm:
    """Return ``symbols`` as a :class:`FreqPerm` or raise naming the first defect."""
    symbols = tuple(int(s) for s in symbols)
    if len(symbols) != lam * m:
        raise WrongLength(f"word has length {len(symbols)}, expected {lam * m}")
    for pos, s in enumerate(symbols, start=1):
        if not 1 <= s <= m:
            raise OutOfRangeSymbol(f"symbol {s} at position {pos} outside [1, {m}]")
    counts = Counter(symbols)
    for v in range(1, m + 1):
        if counts[v] != lam:
            raise WrongMultiplicity(f"symbol {v} occurs {counts[v]} times, expected {lam}")
    return FreqPerm(symbols)


def linf_distance(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise WrongLength(f"length mismatch: {len(x)} vs {len(y)}")
    return max((abs(a - b) for a, b in zip(x, y)), default=0)


def identity_perm(lam: int, m: int) -> FreqPerm:
    """I_n^lam = (1,..,1, 2,..,2, .., m,..,m)."""
    if lam < 1 or m < 1:
        raise ParameterError(f"lambda and m must be positive (lambda={lam}, m={m})")
    return FreqPerm(ceil_div(i, lam) for i in range(1, lam * m + 1))


def space_size(lam: int, m: int) -> int:
    """|S_n^lam| = n! / (lam!)^m, exactly."""
    return factorial(lam * m) // factorial(lam) ** m


def _check_cap(lam: int, m: int, cap: int) -> int:
    size = space_size(lam, m)
    if size > cap:
        raise CapExceeded(f"|S_n^lambda| = {size} exceeds cap {cap} (lambda={lam}, m={m})")
    return size


def enumerate_words(lam: int, m: int, cap: int = DEFAULT_WORD_CAP) -> Iterator[FreqPerm]:
    """Yield every word of S_n^lam once, in lexicographic order."""
    _check_cap(lam, m, cap)
    cur = list(identity_perm(lam, m))
    n = len(cur)
    while True:
        yield FreqPerm(cur)
        i = n - 2
        while i >= 0 and cur[i] >= cur[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while cur[j] <= cur[i]:
            j -= 1
        cur[i], cur[j] = cur[j], cur[i]
        cur[i + 1:] = reversed(cur[i + 1:])


def words_array(lam: int, m: int, cap: int = DEFAULT_WORD_CAP) -> np.ndarray:
    """All of S_n^lam as an ``(|S|, n)`` int64 array, rows in lexicographic order."""
    size = _check_cap(lam, m, cap)
    return kernels.multiset_words(lam, m, size)
