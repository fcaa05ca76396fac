from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from prioranging.channel import Transmission, resolve_opportunity
from prioranging.core import Priority, partition_codes
from prioranging.station import select_code


def tx(*codes):
    return [Transmission(i, c) for i, c in enumerate(codes)]


def test_empty_opportunity():
    out = resolve_opportunity([], 4, np.random.default_rng(0))
    assert out.detected == out.collided == out.overflow_dropped == []


def test_same_code_collides():
    out = resolve_opportunity(tx(3, 3), 4, np.random.default_rng(0))
    assert out.collided == [0, 1]
    assert out.detected == []


def test_mixed_collision_and_detection():
    out = resolve_opportunity(tx(1, 2, 1, 5), 4, np.random.default_rng(0))
    assert out.collided == [0, 2]
    assert out.detected == [1, 3]


def test_beta_cap_selects_uniform_subset():
    rng = np.random.default_rng(99)
    trials = 100_000
    counts = Counter()
    for _ in range(trials):
        out = resolve_opportunity(tx(0, 1, 2, 3, 4), 4, rng)
        assert len(out.detected) == 4 and len(out.overflow_dropped) == 1 and not out.collided
        counts[tuple(sorted(out.detected))] += 1
    subsets = list(combinations(range(5), 4))
    assert set(counts) == set(subsets)
    assert stats.chisquare([counts[s] for s in subsets]).pvalue > 0.01


def test_first_k_policy_is_deterministic():
    out = resolve_opportunity(tx(9, 4, 7, 1, 3), 2, None, overflow_policy="first-k-by-code-index")
    assert sorted(out.detected) == [3, 4]  # codes 1 and 3
    assert sorted(out.overflow_dropped) == [0, 1, 2]


def test_unbounded_beta_detects_all_unique():
    out = resolve_opportunity(tx(*range(20)), None)
    assert out.detected == list(range(20))


def test_mixed_opportunities_rejected():
    with pytest.raises(ValueError):
        resolve_opportunity([Transmission(0, 1, 0), Transmission(1, 2, 1)], 4)


@given(st.lists(st.integers(0, 7), max_size=30), st.one_of(st.none(), st.integers(1, 8)),
       st.integers(0, 2**32))
def test_outcome_partitions_transmitters(codes, beta, seed):
    out = resolve_opportunity(tx(*codes), beta, np.random.default_rng(seed))
    sets = [set(out.detected), set(out.collided), set(out.overflow_dropped)]
    assert sum(map(len, sets)) == len(codes)
    assert set().union(*sets) == set(range(len(codes)))
    if beta is not None:
        assert len(out.detected) <= beta
    mult = Counter(codes)
    assert all(mult[codes[i]] >= 2 for i in out.collided)


@given(st.integers(0, 2**32))
def test_resolution_is_deterministic(seed):
    txs = tx(0, 1, 2, 3, 4, 5, 5, 6)
    a = resolve_opportunity(txs, 3, np.random.default_rng(seed))
    b = resolve_opportunity(txs, 3, np.random.default_rng(seed))
    assert a == b


@given(st.integers(2, 40), st.integers(0, 2**32))
def test_no_inter_priority_collision(n, seed):
    rng = np.random.default_rng(seed)
    part = partition_codes(32, 0.25)
    prio = {i: Priority.HIGH if i % 3 == 0 else Priority.LOW for i in range(n)}
    txs = [Transmission(i, select_code(prio[i], part, rng)) for i in range(n)]
    out = resolve_opportunity(txs, 4, rng)
    by_code = {}
    for t in txs:
        if t.station_id in out.collided:
            by_code.setdefault(t.code, set()).add(prio[t.station_id])
    assert all(len(classes) == 1 for classes in by_code.values())
