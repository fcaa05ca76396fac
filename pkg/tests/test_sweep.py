import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prioranging.core import TABLE1
from prioranging.engine import run_replications
from prioranging.sweep import SweepRow, find_optimal, grid_points, sweep


def row(hp, lp, hp_mean, lp_mean):
    return SweepRow(hp, lp, 0.25, 0.1, hp_mean=hp_mean, lp_mean=lp_mean, hp_std=0, lp_std=0,
                    n_seeds=1)


def test_single_point_matches_replications():
    cfg = TABLE1.replace(n_frames=40)
    [r] = sweep(cfg, [16], [128], n_seeds=5)
    reps = run_replications(cfg, 5)
    assert r.hp_mean == reps.hp_ratio_mean[-1] and r.lp_std == reps.lp_ratio_std[-1]


def test_invalid_points_are_reported_not_raised():
    rows = sweep(TABLE1.replace(n_frames=5), [16, 2048], [128], n_seeds=2)
    assert rows[0].ok
    assert not rows[1].ok and "rssw_start_hp" in rows[1].error


def test_grid_order_and_pairwise():
    pts = grid_points([1, 2], [4, 8], [0.25, 0.5], [0.1], pairwise=True)
    assert pts == [(1, 4, 0.25, 0.1), (2, 8, 0.25, 0.1), (1, 4, 0.5, 0.1), (2, 8, 0.5, 0.1)]
    assert len(grid_points([1, 2], [4, 8], [0.25], [0.1, 1.0])) == 8
    with pytest.raises(ValueError):
        grid_points([1], [2, 4], [0.25], [0.1], pairwise=True)


def test_find_optimal_prefers_best_lp():
    rows = [row(8, 128, 0.999, 0.80), row(16, 128, 0.99, 0.84), row(32, 128, 0.97, 0.90)]
    assert find_optimal(rows, 0.98) is rows[1]


def test_find_optimal_ties():
    rows = [row(8, 256, 0.99, 0.85), row(16, 512, 0.99, 0.85), row(16, 256, 0.99, 0.85)]
    best = find_optimal(rows, 0.98)
    assert (best.rssw_start_hp, best.rssw_start_lp) == (16, 256)


def test_find_optimal_infeasible():
    assert find_optimal([row(8, 128, 0.97, 0.9)], 0.98) is None
    assert find_optimal([], 0.5) is None
    with pytest.raises(ValueError):
        find_optimal([], 0.0)


def test_unit_target_usually_unreachable():
    rows = sweep(TABLE1.replace(arrival_prob=1.0, n_frames=10), [16, 32], [128], n_seeds=20)
    assert find_optimal(rows, 1.0) is None


tables = st.lists(
    st.builds(row, st.sampled_from([1, 2, 4, 8, 16, 32]), st.sampled_from([64, 128, 256]),
              st.floats(0, 1), st.floats(0, 1)),
    max_size=20)


@given(tables, st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_feasible_set_monotone(rows, t1, t2):
    lo, hi = sorted((t1, t2))
    feasible = lambda t: {id(r) for r in rows if r.hp_mean >= t}
    assert feasible(hi) <= feasible(lo)
    best_hi, best_lo = find_optimal(rows, hi), find_optimal(rows, lo)
    if best_hi is not None:
        assert best_lo is not None and best_lo.lp_mean >= best_hi.lp_mean
    assert find_optimal(rows, hi) is best_hi


def test_fig5a_pairs_order_hp():
    rows = sweep(TABLE1.replace(arrival_prob=1.0, alpha=0.5, n_frames=60),
                 [128, 64, 32], [128, 256, 512], n_seeds=40, pairwise=True)
    hp = [r.hp_mean for r in rows]
    assert hp == sorted(hp)


def test_fig5b_alpha_insensitive():
    rows = sweep(TABLE1.replace(arrival_prob=1.0, rssw_start_hp=16, rssw_start_lp=64),
                 [16], [64], alphas=[0.25, 0.5, 0.75], n_seeds=40)
    hp = np.array([r.hp_mean for r in rows])
    assert hp.max() - hp.min() < 0.05
