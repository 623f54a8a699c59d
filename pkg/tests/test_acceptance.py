"""Acceptance criteria, one test per criterion.

Each test appends a PASS/FAIL line that the terminal summary prints.
Tolerances and sizes are fixed here and never tuned.
"""

import math
import time
from fractions import Fraction

import numpy as np

import acceptance_log
from fpa.channel import EXACT_UNIFORM, ChannelConfig, run_experiment
from fpa.codec import enumerate_codewords, local_decode_outcomes, unique_decode
from fpa.combinatorics import (
    asymptotic_bounds, ball_size_bruteforce, ball_size_exact, build_matrix, gilbert_lower,
    greedy_construct, packing_upper, perm_bound_lower, perm_bound_upper, permanent_naive,
    permanent_ryser,
)
from fpa.core import CodeParams, enumerate_words, linf_distance
from fpa.pir import MONTE_CARLO, estimate_privacy, pir_retrieve, pir_setup, retrieval_outcomes
from fpa.rng import RandomSource

# every (lam, m, d) with n = lam * m <= 8 and d <= m
GRID = [(lam, m, d) for lam in range(1, 9) for m in range(1, 8 // lam + 1) for d in range(0, m + 1)]

PAPER_A_2_10_2 = np.array([
    [1, 1, 1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
])

_RESULTS = {}


def record(num, desc, ok, detail=""):
    _RESULTS[num] = ok
    line = f"[{'PASS' if ok else 'FAIL'}] AC{num}: {desc}" + (f" ({detail})" if detail else "")
    acceptance_log.LINES.append(line)
    print(line)
    assert ok, line


def test_ac1_round_trip():
    start = time.perf_counter()
    ok = True
    for lam, n, k in [(2, 8, 4), (2, 8, 6), (3, 9, 3), (1, 8, 6)]:
        params = CodeParams.create(lam, n, k)
        ok &= all(unique_decode(w, params) == msg for msg, w in enumerate_codewords(params))
    elapsed = time.perf_counter() - start
    record(1, "round trip over all messages", ok and elapsed < 1.0, f"{elapsed:.3f}s")


def test_ac2_minimum_distance():
    start = time.perf_counter()
    ok = True
    details = []
    for lam, n, k in [(2, 8, 4), (3, 9, 3)]:
        params = CodeParams.create(lam, n, k)
        words = [w for _, w in enumerate_codewords(params)]
        dmin = min(linf_distance(a, b) for x, a in enumerate(words) for b in words[x + 1:])
        ok &= params.d == 2 and dmin >= params.d and len(set(words)) == 2**k
        details.append(f"({lam},{n},{k}) d={params.d} min={dmin}")
    elapsed = time.perf_counter() - start
    record(2, "pairwise distance >= d, codewords distinct", ok and elapsed < 1.0,
           ", ".join(details) + f", {elapsed:.3f}s")


def test_ac3_error_correction_radius():
    params = CodeParams.create(2, 8, 2)
    words = list(enumerate_words(2, 4))
    checked = 0
    ok = params.d == 3
    for msg, c in enumerate_codewords(params):
        for w in words:
            if linf_distance(c, w) <= 1:
                checked += 1
                ok &= unique_decode(w, params) == msg
    big = CodeParams.create(2, 12, 2)
    report = run_experiment(big, ChannelConfig(2, EXACT_UNIFORM), 10**4, RandomSource(20240601))
    ok &= big.d == 5 and report.unique_decode_success_rate == 1.0
    record(3, "unique decoding within floor((d-1)/2)", ok,
           f"{checked} radius-1 words at (2,8,2); rate {report.unique_decode_success_rate} "
           f"over 1e4 delta=2 words at (2,12,2)")


def test_ac4_ball_size_consistency():
    start = time.perf_counter()
    ok = all(ball_size_exact(lam, lam * m, d) == ball_size_bruteforce(lam, lam * m, d)
             for lam, m, d in GRID)
    ok &= ball_size_exact(1, 5, 2) == 31 and ball_size_exact(1, 5, 1) == 8
    elapsed = time.perf_counter() - start
    record(4, "ball_size_exact == ball_size_bruteforce on n <= 8", ok and elapsed < 10.0,
           f"{len(GRID)} cases, {elapsed:.2f}s")


def test_ac5_permanent_oracle():
    ok = all(permanent_ryser(build_matrix(lam, lam * m, d)) == permanent_naive(build_matrix(lam, lam * m, d))
             for lam, m, d in GRID)
    ok &= np.array_equal(build_matrix(2, 10, 2), PAPER_A_2_10_2)
    record(5, "Ryser == naive permanent; A^(2,10,2) matches the displayed matrix", ok,
           f"{len(GRID)} matrices")


def test_ac6_bound_sandwich():
    tol = 1e-9
    ok = True
    for lam, m, d in GRID:
        n = lam * m
        logper = math.log(permanent_ryser(build_matrix(lam, n, d)))
        ok &= perm_bound_lower(lam, n, d) <= logper + tol
        ok &= logper <= perm_bound_upper(lam, n, d) + tol
        if d >= 1:
            lo, hi = asymptotic_bounds(lam, n, d)
            ok &= lo <= math.log(gilbert_lower(lam, n, d)) + tol
            ok &= math.log(packing_upper(lam, n, d)) <= hi + tol
    record(6, "permanent and asymptotic bound sandwiches", ok, f"{len(GRID)} cases, tol {tol}")


def test_ac7_greedy_construction():
    small = greedy_construct(1, 3, 2)
    ok = len(small) == 3 and min(linf_distance(a, b) for a in small for b in small if a != b) == 2
    cases = 0
    for lam, m, d in GRID:
        if d < 1:
            continue
        n = lam * m
        code = greedy_construct(lam, n, d)
        rows = np.array(code)
        ok &= len(set(code)) == len(code)
        if d > 1:
            for a in range(len(rows) - 1):
                ok &= bool((np.abs(rows[a + 1:] - rows[a]).max(axis=1) >= d).all())
        ok &= math.ceil(gilbert_lower(lam, n, d)) <= len(code) <= math.floor(packing_upper(lam, n, d))
        cases += 1
    record(7, "greedy code: distance >= d, size within Gilbert/packing", ok, f"{cases} cases")


def test_ac8_local_decoder():
    params = CodeParams.create(2, 8, 4)
    ok_a = ok_b = True
    leaves = 0
    for msg, word in enumerate_codewords(params):
        for i in range(1, params.k + 1):
            total = Fraction(0)
            for prob, res in local_decode_outcomes(word, i, params):
                leaves += 1
                total += prob
                ok_a &= res.bit == msg[i - 1] and res.symbols_read <= params.lam + 1
                ok_b &= res.iterations <= params.lam
            ok_a &= total == 1

    big = CodeParams.create(2, 12, 2)
    trials = 10**5
    ok_c = True
    details = []
    for delta, seed in [(1, 101), (2, 202)]:
        report = run_experiment(big, ChannelConfig(delta, EXACT_UNIFORM), trials, RandomSource(seed))
        bound = (2 * delta + 1) / big.d
        slack = 3 * math.sqrt(bound * (1 - bound) / trials)
        ok_b &= report.local_max_iterations <= big.lam
        ok_c &= report.local_first_iter_error_rate <= bound + slack
        details.append(f"delta={delta}: {report.local_first_iter_error_rate:.4f} <= {bound + slack:.4f}")
    record(8, "local decoder: exact on codewords, <= lam iterations, first-iteration bound",
           ok_a and ok_b and ok_c, f"{leaves} tree leaves; " + "; ".join(details))


def test_ac9_pir():
    params = CodeParams.create(2, 8, 4)
    ok = True
    leaves = 0
    for msg, _ in enumerate_codewords(params):
        farm = pir_setup(msg, params)
        for i in range(1, params.k + 1):
            for _, tr in retrieval_outcomes(farm, i):
                leaves += 1
                ok &= tr.bit == msg[i - 1]
                ok &= sorted(tr.per_server_query) == list(range(farm.q))
    farm = pir_setup((1, 0, 1, 1), params)
    rng = RandomSource(5)
    for t in range(100):
        pir_retrieve(farm, 1 + t % 4, rng.split(t))
        ok &= [len(log) for log in farm.query_log] == [t + 1] * farm.q

    exact = estimate_privacy(params, (1, 0, 1, 1))
    mc = estimate_privacy(params, (1, 0, 1, 1), mode=MONTE_CARLO, trials=20000,
                          rng=RandomSource(424242))
    ok &= 0 < exact.p_estimate <= 1
    ok &= abs(mc.p_estimate - exact.p_estimate) <= 3 * mc.stderr
    record(9, "PIR: perfect retrievability, one query per server, privacy consistent", ok,
           f"{leaves} retrieval branches; p exact {exact.p_estimate:.4f}, "
           f"MC {mc.p_estimate:.4f} +- {mc.stderr:.4f}")


def test_ac10_coverage_note():
    # no experimental tables exist to reproduce; coverage is AC1-AC9 above
    ran = [n for n in range(1, 10) if n in _RESULTS]
    record(10, "oracle/property coverage of every theorem", ran == list(range(1, 10))
           and all(_RESULTS[n] for n in ran), f"criteria passed: {ran}")
