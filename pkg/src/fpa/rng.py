"""Replayable randomness.

All randomised procedures draw exclusively through :meth:`RandomSource.below`,
which makes them replayable from a seed and lets :func:`explore` walk the
complete tree of outcomes with exact probabilities.
"""

from __future__ import annotations

import random
import secrets
from fractions import Fraction
from typing import Callable, Iterator, Sequence, TypeVar

T = TypeVar("T")

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class RandomSource:
    """Seeded uniform integer stream.

    ``split(t)`` derives the seed of child stream ``t`` as
    ``splitmix64(seed ^ splitmix64(t))``; children are independent of the
    order in which they are created.
    """

    def __init__(self, seed: int | None = None):
        if seed is None:
            seed = secrets.randbits(64)
        self.seed = int(seed) & _MASK64
        self._rng = random.Random(self.seed)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        return self._rng.randrange(n)

    def split(self, index: int) -> "RandomSource":
        return RandomSource(splitmix64(self.seed ^ splitmix64(index)))

    def shuffle(self, items: list) -> list:
        """In-place Fisher-Yates using only :meth:`below`."""
        for pos in range(len(items) - 1, 0, -1):
            other = self.below(pos + 1)
            items[pos], items[other] = items[other], items[pos]
        return items


class ScriptedSource(RandomSource):
    """Replays a fixed list of choices; used to force specific branches."""

    def __init__(self, choices: Sequence[int]):
        self.seed = 0
        self._choices = list(choices)
        self._pos = 0
        self.arities: list[int] = []
        self.taken: list[int] = []

    def below(self, n: int) -> int:
        if self._pos < len(self._choices):
            c = self._choices[self._pos]
            if not 0 <= c < n:
                raise ValueError(f"scripted choice {c} not in [0, {n})")
        else:
            c = 0
        self._pos += 1
        self.arities.append(n)
        self.taken.append(c)
        return c

    def split(self, index: int) -> "RandomSource":
        raise NotImplementedError("scripted sources cannot be split")


def explore(fn: Callable[[RandomSource], T]) -> Iterator[tuple[Fraction, T]]:
    """Run ``fn`` on every branch of its randomness tree.

    Yields ``(probability, result)`` per leaf; probabilities sum to one.
    ``fn`` must be deterministic given the values returned by ``below``.
    """
    stack: list[list[int]] = [[]]
    while stack:
        prefix = stack.pop()
        src = ScriptedSource(prefix)
        result = fn(src)
        prob = Fraction(1)
        for a in src.arities:
            prob /= a
        for depth in range(len(src.taken) - 1, len(prefix) - 1, -1):
            for alt in range(src.arities[depth] - 1, 0, -1):
                stack.append(src.taken[:depth] + [alt])
        yield prob, result
