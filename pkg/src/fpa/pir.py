"""(lam+1)-server private information retrieval on top of the local decoder.

Every server stores the same codeword. To fetch bit i the client runs the
local decoder and sends its t-th read to server ``order[t]`` for a fresh
uniformly random bijection ``order``; servers the decoder did not need get
one dummy query at a uniform position, so each server sees exactly one
index per retrieval.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .codec import enumerate_codewords, encode, local_decode_reads
from .core import CodeParams, FreqPerm, Message, validate_word
from .errors import CapExceeded, EmptyTrials, IndexOutOfRange, ParameterError
from .rng import RandomSource, explore

EXACT = "exact"
MONTE_CARLO = "monte-carlo"
DEFAULT_TREE_CAP = 10**6


class _OutOfServers(Exception):
    pass


@dataclass(frozen=True)
class QueryRequest:
    position: int


@dataclass(frozen=True)
class QueryResponse:
    position: int
    symbol: int


class Server:
    """One replica. Talks only through :meth:`handle`."""

    def __init__(self, replica: FreqPerm):
        self.replica = replica
        self.log: list[int] = []

    def handle(self, request: QueryRequest, record: bool = True) -> QueryResponse:
        pos = request.position
        if not 1 <= pos <= len(self.replica):
            raise IndexOutOfRange(f"position {pos} outside [1, {len(self.replica)}]")
        if record:
            self.log.append(pos)
        return QueryResponse(pos, self.replica[pos - 1])


@dataclass
class ServerFarm:
    params: CodeParams
    servers: list[Server]

    @property
    def q(self) -> int:
        return len(self.servers)

    @property
    def replicas(self) -> list[FreqPerm]:
        return [s.replica for s in self.servers]

    @property
    def query_log(self) -> list[list[int]]:
        return [list(s.log) for s in self.servers]

    def corrupt(self, server: int, word: Sequence[int]) -> None:
        """Replace one replica (0-based server id) with another word of S_n^lam."""
        self.servers[server].replica = validate_word(word, self.params.lam, self.params.m)


@dataclass(frozen=True)
class RetrievalTranscript:
    target: int
    per_server_query: dict
    """server id (0-based) -> queried position (1-based)."""
    real_servers: tuple[int, ...]
    """Servers whose answer fed the decoder, in read order."""
    bit: Optional[int]
    """``None`` when the decoder ran out of servers (possible only when
    replicas disagree)."""

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "queries": [{"server": s, "position": p}
                        for s, p in sorted(self.per_server_query.items())],
            "bit": self.bit,
        }


def pir_setup(msg: Sequence[int], params: CodeParams) -> ServerFarm:
    word = encode(msg, params)
    return ServerFarm(params, [Server(word) for _ in range(params.lam + 1)])


def pir_retrieve(farm: ServerFarm, i: int, rng: RandomSource,
                 record: bool = True) -> RetrievalTranscript:
    """Retrieve message bit ``i`` (1-based) with one query per server."""
    params = farm.params
    if not 1 <= i <= params.k:
        raise IndexOutOfRange(f"bit index {i} outside [1, {params.k}]")
    order = rng.shuffle(list(range(farm.q)))
    queries: dict[int, int] = {}

    def read(pos: int) -> int:
        slot = len(queries)
        if slot >= farm.q:
            raise _OutOfServers
        server = order[slot]
        queries[server] = pos
        return farm.servers[server].handle(QueryRequest(pos), record).symbol

    try:
        bit = local_decode_reads(read, i, params.n, rng).bit
    except _OutOfServers:
        bit = None
    real = tuple(order[:len(queries)])
    for server in order[len(queries):]:
        pos = 1 + rng.below(params.n)
        farm.servers[server].handle(QueryRequest(pos), record)
        queries[server] = pos
    return RetrievalTranscript(i, queries, real, bit)


def retrieval_outcomes(farm: ServerFarm, i: int) -> Iterator[tuple[Fraction, RetrievalTranscript]]:
    """Every branch of :func:`pir_retrieve` (bijection, decoder draws, dummies)."""
    if not 1 <= i <= farm.params.k:
        raise IndexOutOfRange(f"bit index {i} outside [1, {farm.params.k}]")
    return explore(lambda src: pir_retrieve(farm, i, src, record=False))


def estimate_retrievability(params: CodeParams, msg: Sequence[int], trials: int,
                            rng: RandomSource, farm: Optional[ServerFarm] = None) -> float:
    """Fraction of retrievals, over uniform targets, that return the right bit."""
    if trials < 1:
        raise EmptyTrials("need at least one trial")
    msg = Message(msg)
    if farm is None:
        farm = pir_setup(msg, params)
    hits = 0
    for t in range(trials):
        src = rng.split(t)
        i = 1 + src.below(params.k)
        hits += pir_retrieve(farm, i, src, record=False).bit == msg[i - 1]
    return hits / trials


@dataclass(frozen=True)
class PrivacyEstimate:
    p_estimate: float
    mode: str
    trials: Optional[int]
    seed: Optional[int]
    stderr: float = 0.0
    """Delta-method standard error; zero in exact mode."""
    worst: Optional[tuple] = None
    """(server, i, j) attaining the maximum."""
    distributions: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {"p_estimate": self.p_estimate, "mode": self.mode,
                "trials": self.trials, "seed": self.seed, "stderr": self.stderr}


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return float(sum(abs(Fraction(p.get(x, 0)) - Fraction(q.get(x, 0))) for x in keys) / 2)


def _exact_distributions(farm: ServerFarm, cap: int) -> dict:
    dists = {}
    for i in range(1, farm.params.k + 1):
        per_server = defaultdict(lambda: defaultdict(Fraction))
        leaves = 0
        for prob, tr in retrieval_outcomes(farm, i):
            leaves += 1
            if leaves > cap:
                raise CapExceeded(f"randomness tree exceeds {cap} leaves")
            for s, pos in tr.per_server_query.items():
                per_server[s][pos] += prob
        dists[i] = {s: dict(d) for s, d in per_server.items()}
    return dists


def _empirical_distributions(farm: ServerFarm, trials: int, rng: RandomSource) -> dict:
    dists = {}
    for i in range(1, farm.params.k + 1):
        sub = rng.split(i)
        counts = defaultdict(Counter)
        for t in range(trials):
            tr = pir_retrieve(farm, i, sub.split(t), record=False)
            for s, pos in tr.per_server_query.items():
                counts[s][pos] += 1
        dists[i] = {s: {pos: Fraction(c, trials) for pos, c in cnt.items()}
                    for s, cnt in counts.items()}
    return dists


def _tv_stderr(p: dict, q: dict, trials: int) -> float:
    keys = set(p) | set(q)
    sign = {x: (p.get(x, 0) > q.get(x, 0)) - (p.get(x, 0) < q.get(x, 0)) for x in keys}
    var = 0.0
    for dist in (p, q):
        mean = sum(sign[x] * float(v) for x, v in dist.items())
        second = sum(sign[x] ** 2 * float(v) for x, v in dist.items())
        var += (second - mean * mean) / trials
    return 0.5 * math.sqrt(max(var, 0.0))


def estimate_privacy(params: CodeParams, msg: Sequence[int], mode: str = EXACT,
                     trials: int = 0, rng: Optional[RandomSource] = None,
                     tree_cap: int = DEFAULT_TREE_CAP) -> PrivacyEstimate:
    """Max over servers s and target pairs (i, j) of TV(D(s, i), D(s, j)).

    ``exact`` weights every randomness branch; ``monte-carlo`` runs
    ``trials`` retrievals per target.
    """
    farm = pir_setup(msg, params)
    if mode == EXACT:
        dists = _exact_distributions(farm, tree_cap)
        seed = None
        trials_out = None
    elif mode == MONTE_CARLO:
        if trials < 1:
            raise EmptyTrials("need at least one trial")
        rng = rng if rng is not None else RandomSource()
        dists = _empirical_distributions(farm, trials, rng)
        seed = rng.seed
        trials_out = trials
    else:
        raise ParameterError(f"unknown privacy mode {mode!r}")
    best, worst = 0.0, None
    for i, j in combinations(range(1, params.k + 1), 2):
        for s in range(farm.q):
            tv = total_variation(dists[i].get(s, {}), dists[j].get(s, {}))
            if tv > best:
                best, worst = tv, (s, i, j)
    stderr = 0.0
    if mode == MONTE_CARLO and worst is not None:
        s, i, j = worst
        stderr = _tv_stderr(dists[i][s], dists[j][s], trials)
    return PrivacyEstimate(best, mode, trials_out, seed, stderr, worst, dists)


def estimate_privacy_all(params: CodeParams, messages: Optional[Iterable[Sequence[int]]] = None,
                         **kwargs) -> PrivacyEstimate:
    """:func:`estimate_privacy` maximised over messages (all 2^k by default)."""
    if messages is None:
        messages = (m for m, _ in enumerate_codewords(params))
    results = [estimate_privacy(params, msg, **kwargs) for msg in messages]
    if not results:
        raise EmptyTrials("no messages given")
    return max(results, key=lambda r: r.p_estimate)
