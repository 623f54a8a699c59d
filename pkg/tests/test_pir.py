import json
from fractions import Fraction

import pytest

from fpa.channel import ChannelConfig, perturb
from fpa.codec import enumerate_codewords, encode
from fpa.core import CodeParams
from fpa.errors import EmptyTrials, IndexOutOfRange
from fpa.pir import (
    MONTE_CARLO, estimate_privacy, estimate_privacy_all, estimate_retrievability,
    pir_retrieve, pir_setup, retrieval_outcomes, total_variation,
)
from fpa.rng import RandomSource


def test_setup():
    p = CodeParams.create(2, 6, 2)
    farm = pir_setup((1, 0), p)
    assert farm.q == 3
    assert farm.replicas == [(3, 1, 1, 2, 2, 3)] * 3
    assert farm.query_log == [[], [], []]
    assert pir_setup((1,), CodeParams.create(1, 4, 1)).q == 2
    assert pir_setup((), CodeParams.create(2, 6, 0)).replicas[0] == (1, 1, 2, 2, 3, 3)


def test_retrieve_examples():
    p = CodeParams.create(2, 6, 2)
    farm = pir_setup((1, 0), p)
    tr = pir_retrieve(farm, 1, RandomSource(3))
    assert tr.bit == 1
    assert sorted(tr.per_server_query) == [0, 1, 2]
    assert all(len(log) == 1 for log in farm.query_log)
    assert pir_retrieve(pir_setup((0, 0), p), 2, RandomSource(4)).bit == 0


def test_every_server_gets_one_query_per_retrieval():
    p = CodeParams.create(3, 12, 5)
    farm = pir_setup((1, 0, 1, 1, 0), p)
    rng = RandomSource(10)
    for t in range(200):
        pir_retrieve(farm, 1 + t % 5, rng.split(t))
        assert [len(log) for log in farm.query_log] == [t + 1] * 4


def test_retrieve_rejects_bad_index():
    farm = pir_setup((1, 0), CodeParams.create(2, 6, 2))
    with pytest.raises(IndexOutOfRange):
        pir_retrieve(farm, 3, RandomSource(0))


def test_transcript_json():
    farm = pir_setup((1, 0), CodeParams.create(2, 6, 2))
    data = json.loads(json.dumps(pir_retrieve(farm, 2, RandomSource(1)).to_dict()))
    assert data["target"] == 2 and data["bit"] == 0
    assert sorted(q["server"] for q in data["queries"]) == [0, 1, 2]


def test_outcome_tree_is_a_distribution():
    farm = pir_setup((1, 1, 0), CodeParams.create(2, 8, 3))
    leaves = list(retrieval_outcomes(farm, 2))
    assert sum(p for p, _ in leaves) == 1
    assert all(tr.bit == 1 and len(tr.per_server_query) == 3 for _, tr in leaves)


def test_privacy_trivial_cases():
    assert estimate_privacy(CodeParams.create(2, 6, 1), (1,)).p_estimate == 0
    d = {1: Fraction(1, 2), 3: Fraction(1, 2)}
    assert total_variation(d, d) == 0
    assert total_variation({1: 1}, {2: 1}) == 1


def test_privacy_exact_example():
    p = CodeParams.create(2, 6, 2)
    est = estimate_privacy(p, (1, 0))
    assert 0 < est.p_estimate <= 1
    # read slot 0 always goes to the target position; each server sees it w.p. 1/3
    for s in range(3):
        assert est.distributions[1][s][1] >= Fraction(1, 3)
    s, i, j = est.worst
    assert est.p_estimate == total_variation(est.distributions[i][s], est.distributions[j][s])


def test_privacy_symmetric_and_bounded():
    p = CodeParams.create(2, 8, 3)
    est = estimate_privacy(p, (0, 1, 1))
    dists = est.distributions
    for a in dists:
        for b in dists:
            for s in range(3):
                tv = total_variation(dists[a][s], dists[b][s])
                assert tv == total_variation(dists[b][s], dists[a][s])
                assert 0 <= tv <= est.p_estimate


def test_privacy_monte_carlo_agrees():
    p = CodeParams.create(2, 6, 2)
    exact = estimate_privacy(p, (1, 0)).p_estimate
    mc = estimate_privacy(p, (1, 0), mode=MONTE_CARLO, trials=20000, rng=RandomSource(31))
    assert abs(mc.p_estimate - exact) <= 3 * mc.stderr
    assert mc.to_dict()["seed"] == 31


def test_privacy_all_messages():
    p = CodeParams.create(2, 6, 2)
    best = estimate_privacy_all(p)
    assert best.p_estimate == max(estimate_privacy(p, m).p_estimate
                                  for m, _ in enumerate_codewords(p))


def test_retrievability_perfect():
    p = CodeParams.create(3, 12, 4)
    assert estimate_retrievability(p, (1, 0, 0, 1), 500, RandomSource(2)) == 1.0
    with pytest.raises(EmptyTrials):
        estimate_retrievability(p, (1, 0, 0, 1), 0, RandomSource(2))


def test_retrievability_with_corrupted_replica():
    p = CodeParams.create(1, 40, 4)  # d = 36
    msg = (1, 0, 1, 0)
    delta = 2
    bound = 1 - (2 * delta + 1) / p.d
    farm = pir_setup(msg, p)
    noisy = perturb(encode(msg, p), ChannelConfig(delta, "swap-walk"), RandomSource(9))
    farm.corrupt(0, noisy)
    r = estimate_retrievability(p, msg, 4000, RandomSource(3), farm=farm)
    assert r >= bound
