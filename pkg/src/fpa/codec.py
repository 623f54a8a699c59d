"""Encoder, unique decoder and randomised local decoder for C(lam, n, k)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

from .core import CodeParams, FreqPerm, Message, ceil_div, validate_word
from .errors import CapExceeded, IndexOutOfRange, ParameterError
from .rng import RandomSource, explore

DEFAULT_CODEWORD_CAP = 2**20


def _as_message(msg: Sequence[int], params: CodeParams) -> Message:
    msg = msg if isinstance(msg, Message) else Message(msg)
    if len(msg) != params.k:
        raise ParameterError(f"message has {len(msg)} bits, parameters expect k={params.k}")
    return msg


def encode(msg: Sequence[int], params: CodeParams) -> FreqPerm:
    """Map k bits to a word of S_n^lam.

    A 1 bit takes the current top symbol ceil(max/lam) and lowers ``max``;
    a 0 bit takes the current bottom symbol ceil(min/lam) and raises ``min``.
    The remaining n - k positions are filled from the bottom upwards.
    """
    msg = _as_message(msg, params)
    lam, n = params.lam, params.n
    hi, lo = n, 1
    out = []
    for bit in msg:
        if bit:
            out.append(ceil_div(hi, lam))
            hi -= 1
        else:
            out.append(ceil_div(lo, lam))
            lo += 1
    for _ in range(params.k, n):
        out.append(ceil_div(lo, lam))
        lo += 1
    return FreqPerm(out)


def unique_decode(word: Sequence[int], params: CodeParams) -> Message:
    """Recover the message of any word within floor((d-1)/2) of a codeword.

    Replays the encoder's two counters and picks, per position, whichever of
    the top and bottom symbol is strictly closer; ties decode to 0.
    """
    x = validate_word(word, params.lam, params.m)
    lam = params.lam
    hi, lo = params.n, 1
    bits = []
    for i in range(params.k):
        if abs(x[i] - ceil_div(hi, lam)) < abs(x[i] - ceil_div(lo, lam)):
            bits.append(1)
            hi -= 1
        else:
            bits.append(0)
            lo += 1
    return Message(bits)


@dataclass(frozen=True)
class LocalDecodeResult:
    bit: int
    iterations: int
    symbols_read: int
    read_positions: tuple[int, ...]
    """1-based positions in read order; the target position comes first."""

    def to_dict(self) -> dict:
        return {
            "bit": self.bit,
            "iterations": self.iterations,
            "symbols_read": self.symbols_read,
            "read_positions": list(self.read_positions),
        }


def local_decode_reads(read: Callable[[int], int], i: int, n: int,
                       rng: RandomSource) -> LocalDecodeResult:
    """Local decoding against an arbitrary symbol oracle ``read(position)``.

    Draws j uniformly without replacement from {i+1, .., n} until x_j != x_i.
    The PIR client uses this entry point to route each read to a server.
    """
    xi = read(i)
    pool = list(range(i + 1, n + 1))
    positions = [i]
    while pool:
        t = rng.below(len(pool))
        j = pool[t]
        pool[t] = pool[-1]
        pool.pop()
        xj = read(j)
        positions.append(j)
        if xi != xj:
            iters = len(positions) - 1
            return LocalDecodeResult(int(xi > xj), iters, iters + 1, tuple(positions))
    raise RuntimeError(f"position {i} has no differing symbol after it; word is not in S_n^lambda")


def local_decode(word: Sequence[int], i: int, params: CodeParams,
                 rng: RandomSource) -> LocalDecodeResult:
    """Decode message bit ``i`` (1-based) reading at most lam + 1 symbols."""
    if not 1 <= i <= params.k:
        raise IndexOutOfRange(f"bit index {i} outside [1, {params.k}]")
    x = validate_word(word, params.lam, params.m)
    return local_decode_reads(lambda pos: x[pos - 1], i, params.n, rng)


def local_decode_outcomes(word: Sequence[int], i: int,
                          params: CodeParams) -> Iterator[tuple[Fraction, LocalDecodeResult]]:
    """Every randomness branch of :func:`local_decode` with its exact probability."""
    x = validate_word(word, params.lam, params.m)
    if not 1 <= i <= params.k:
        raise IndexOutOfRange(f"bit index {i} outside [1, {params.k}]")
    return explore(lambda src: local_decode(x, i, params, src))


def enumerate_codewords(params: CodeParams,
                        cap: int = DEFAULT_CODEWORD_CAP) -> Iterator[tuple[Message, FreqPerm]]:
    """Yield ``(m, encode(m))`` for all m in lexicographic message order."""
    if 2**params.k > cap:
        raise CapExceeded(f"2^{params.k} codewords exceeds cap {cap}")
    for bits in product((0, 1), repeat=params.k):
        msg = Message(bits)
        yield msg, encode(msg, params)
