"""Bounded l-infinity noise inside S_n^lam, and decoder experiments.

The channel never leaves S_n^lam: a received word is a multiset permutation
within distance ``delta`` of the transmitted one. ``exact-uniform`` samples
uniformly from that ball; ``swap-walk`` runs constrained transpositions and
is cheaper but not uniform.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .codec import encode, local_decode, unique_decode
from .core import CodeParams, FreqPerm, Message, validate_word
from .errors import CapExceeded, EmptyTrials, ParameterError
from .rng import RandomSource

EXACT_UNIFORM = "exact-uniform"
SWAP_WALK = "swap-walk"
DEFAULT_BALL_CAP = 10**7


@dataclass(frozen=True)
class ChannelConfig:
    delta: int
    mode: str = EXACT_UNIFORM
    walk_steps: Optional[int] = None
    """Swap attempts for ``swap-walk``; ``None`` means 10 * n."""
    ball_cap: int = DEFAULT_BALL_CAP

    def __post_init__(self):
        if self.delta < 0:
            raise ParameterError(f"delta must be nonnegative, got {self.delta}")
        if self.mode not in (EXACT_UNIFORM, SWAP_WALK):
            raise ParameterError(f"unknown channel mode {self.mode!r}")
        if self.walk_steps is not None and self.walk_steps < 1:
            raise ParameterError("walk_steps must be positive")


def ball_around(word: Sequence[int], delta: int, cap: int = DEFAULT_BALL_CAP) -> tuple[FreqPerm, ...]:
    """All words with the same symbol multiset within ``delta`` of ``word``.

    Depth-first over positions, each taking any still-available symbol in
    ``[x_i - delta, x_i + delta]``; output is in lexicographic order.
    """
    return _ball(tuple(int(s) for s in word), delta, cap)


@lru_cache(maxsize=256)
def _ball(word: tuple, delta: int, cap: int) -> tuple[FreqPerm, ...]:
    n = len(word)
    left = Counter(word)
    symbols = sorted(left)
    out: list[FreqPerm] = []
    cur = [0] * n

    def fill(pos: int) -> None:
        if pos == n:
            out.append(FreqPerm(cur))
            if len(out) > cap:
                raise CapExceeded(f"ball of radius {delta} exceeds cap {cap}")
            return
        x = word[pos]
        for s in symbols:
            if abs(s - x) <= delta and left[s]:
                left[s] -= 1
                cur[pos] = s
                fill(pos + 1)
                left[s] += 1

    fill(0)
    return tuple(out)


def perturb(word: Sequence[int], cfg: ChannelConfig, rng: RandomSource) -> FreqPerm:
    """Return a word of the same multiset within ``cfg.delta`` of ``word``."""
    x = tuple(int(s) for s in word)
    if cfg.delta == 0:
        return FreqPerm(x)
    if cfg.mode == EXACT_UNIFORM:
        ball = _ball(x, cfg.delta, cfg.ball_cap)
        return ball[rng.below(len(ball))]
    n = len(x)
    steps = cfg.walk_steps if cfg.walk_steps is not None else 10 * n
    cur = list(x)
    for _ in range(steps):
        a, b = rng.below(n), rng.below(n)
        # compare against the original word so drift can never exceed delta
        if abs(cur[b] - x[a]) <= cfg.delta and abs(cur[a] - x[b]) <= cfg.delta:
            cur[a], cur[b] = cur[b], cur[a]
    return FreqPerm(cur)


@dataclass(frozen=True)
class ExperimentReport:
    trials: int
    delta: int
    d: int
    seed: int
    unique_decode_success_rate: float
    local_first_iter_error_rate: float
    local_overall_error_rate: float
    local_mean_symbols_read: float
    local_max_iterations: int
    theoretical_first_iter_bound: float
    beyond_radius: bool
    """True when delta exceeds floor((d-1)/2) and unique decoding is not guaranteed."""

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "delta": self.delta,
            "d": self.d,
            "uds_rate": self.unique_decode_success_rate,
            "lfi_error_rate": self.local_first_iter_error_rate,
            "lfi_bound": self.theoretical_first_iter_bound,
            "mean_reads": self.local_mean_symbols_read,
            "seed": self.seed,
            "local_error_rate": self.local_overall_error_rate,
            "max_iterations": self.local_max_iterations,
            "beyond_radius": self.beyond_radius,
        }


def run_experiment(params: CodeParams, cfg: ChannelConfig, trials: int,
                   rng: RandomSource) -> ExperimentReport:
    """Encode, perturb and decode ``trials`` random messages.

    Trial t draws everything from ``rng.split(t)``, so reports are
    reproducible from the seed and trials could run in any order.
    """
    if trials < 1:
        raise EmptyTrials("need at least one trial")
    if params.k < 1:
        raise ParameterError("experiments need k >= 1 message bits")
    uds_ok = first_err = overall_err = reads = 0
    max_iters = 0
    for t in range(trials):
        src = rng.split(t)
        msg = Message(src.below(2) for _ in range(params.k))
        received = perturb(encode(msg, params), cfg, src)
        validate_word(received, params.lam, params.m)
        uds_ok += unique_decode(received, params) == msg
        i = 1 + src.below(params.k)
        res = local_decode(received, i, params, src)
        first_err += not (res.iterations == 1 and res.bit == msg[i - 1])
        overall_err += res.bit != msg[i - 1]
        reads += res.symbols_read
        max_iters = max(max_iters, res.iterations)
    return ExperimentReport(
        trials=trials,
        delta=cfg.delta,
        d=params.d,
        seed=rng.seed,
        unique_decode_success_rate=uds_ok / trials,
        local_first_iter_error_rate=first_err / trials,
        local_overall_error_rate=overall_err / trials,
        local_mean_symbols_read=reads / trials,
        local_max_iterations=max_iters,
        theoretical_first_iter_bound=(2 * cfg.delta + 1) / params.d,
        beyond_radius=cfg.delta > params.radius,
    )
