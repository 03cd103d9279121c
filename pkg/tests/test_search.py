import logging
import time

import numpy as np
import pytest

from approxdct.codec import corpus_average
from approxdct.search import (
    PUBLISHED_WINNER_COUNT,
    cost,
    evaluate_candidate,
    instantiate,
    run_search,
)
from approxdct.transforms import OpCount, catalog, orthogonal_matrix

T_STAR = (0, 1, 1, 1, 0, 0, 0)
T_3 = (1, 1, 0, 1, 0, 0, 0)


@pytest.fixture(scope="module")
def result():
    return run_search()


def test_instantiate_proposed():
    assert np.array_equal(instantiate(T_STAR), catalog("proposed").T)
    assert np.array_equal(instantiate(T_3), catalog("modcb2011").T)
    m = instantiate(T_STAR)
    assert np.array_equal(m @ m.T, np.diag([8, 2, 4, 2, 8, 2, 4, 2]))


def test_instantiate_all_ones():
    m = instantiate((1,) * 7)
    assert set(np.abs(m).ravel()) == {1}


def test_instantiate_rejects_bad_params():
    with pytest.raises(ValueError):
        instantiate((0, 1, 3, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        instantiate((0, 1))


def test_cost_published():
    assert cost(instantiate(T_STAR)) == OpCount(0, 14, 0)
    assert cost(instantiate(T_3)) == OpCount(0, 14, 0)
    assert cost(catalog("cb2011").T) == OpCount(0, 22, 0)
    assert cost(catalog("multibeam2012").T) == OpCount(0, 24, 6)


def test_cost_all_ones_hand_count():
    # butterfly 8; each 4x4 block: four shared pair terms (j, +-) for j in {0, 1},
    # then one addition per row joining its two terms -> 4 + 4 per block
    assert cost(instantiate((1,) * 7)) == OpCount(0, 8 + 8 + 8, 0)


def test_cost_counts_shifts():
    # a0 = 2 leaves a single magnitude-2 term in each of the four odd rows
    c = cost(instantiate((2, 0, 0, 1, 0, 0, 0)))
    assert c.shifts == 4


def test_null_row_is_inadmissible():
    c = evaluate_candidate((0,) * 7)
    assert c.has_null_row and not c.admissible


def test_enumeration(result):
    assert len(result.candidates) == 3**7
    assert result.minimal_cost == OpCount(0, 14, 0)
    assert result.collapsed == 0


def test_winners(result):
    params = [w.params for w in result.winners]
    assert T_STAR in params and T_3 in params
    assert len(params) == PUBLISHED_WINNER_COUNT
    assert result.notes == []
    for w in result.winners:
        assert w.admissible and w.cost == result.minimal_cost
        c = orthogonal_matrix(w.spec())
        assert np.abs(c @ c.T - np.eye(8)).max() < 1e-12


def test_fallback_ranking(result):
    assert result.ranking == "mse-fallback"
    scores = [w.score for w in result.ranked]
    assert scores == sorted(scores)
    assert {w.candidate.params for w in result.ranked} == {w.params for w in result.winners}


def test_deterministic(result):
    again = run_search()
    assert [w.candidate.params for w in again.ranked] == [w.candidate.params for w in result.ranked]
    assert again.candidates == result.candidates


def test_speed():
    t = time.perf_counter()
    run_search()
    assert time.perf_counter() - t < 5


def test_psnr_ranking(synthetic_corpus):
    res = run_search(synthetic_corpus[:2], r=10)
    assert res.ranking == "psnr"
    scores = [w.score for w in res.ranked]
    assert scores == sorted(scores, reverse=True)
    best = res.best
    assert res.ranked[0].score == corpus_average(synthetic_corpus[:2], best.spec(), 10).avg_psnr


def test_winner_count_divergence_is_logged(monkeypatch, caplog):
    import approxdct.search as search

    monkeypatch.setattr(search, "PUBLISHED_WINNER_COUNT", 7)
    with caplog.at_level(logging.WARNING):
        res = search.run_search()
    assert res.notes and "published count is 7" in caplog.text


def test_corpus_top_winner(corpus_manifest):
    from approxdct.codec import load_corpus

    assert run_search(load_corpus(corpus_manifest)).best.params == T_STAR
