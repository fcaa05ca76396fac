"""Grid evaluation over start windows, code reservation and arrival probability."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import InvalidConfig, SimConfig, validate
from .engine import run_replications

POW2_WINDOWS = [2**k for k in range(10)]  # 1 .. 512


@dataclass(frozen=True)
class SweepRow:
    rssw_start_hp: int
    rssw_start_lp: int
    alpha: float
    p_a: float
    hp_mean: float = float("nan")
    hp_std: float = float("nan")
    lp_mean: float = float("nan")
    lp_std: float = float("nan")
    n_seeds: int = 0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def grid_points(hp_windows, lp_windows, alphas, arrival_probs, pairwise=False):
    """Grid in row order: p_a, then alpha, then window pairs."""
    if pairwise:
        if len(hp_windows) != len(lp_windows):
            raise ValueError("pairwise sweep needs equally long window lists")
        pairs = list(zip(hp_windows, lp_windows))
    else:
        pairs = list(itertools.product(hp_windows, lp_windows))
    return [(hp, lp, alpha, pa) for pa in arrival_probs for alpha in alphas for hp, lp in pairs]


def evaluate_point(template: SimConfig, hp: int, lp: int, alpha: float, pa: float,
                   n_seeds: int, jobs: int = 1) -> SweepRow:
    try:
        config = validate(template.replace(rssw_start_hp=hp, rssw_start_lp=lp,
                                           alpha=alpha, arrival_prob=pa))
    except InvalidConfig as exc:
        return SweepRow(hp, lp, alpha, pa, n_seeds=n_seeds, error=str(exc))
    reps = run_replications(config, n_seeds, jobs=jobs)
    return SweepRow(hp, lp, alpha, pa,
                    hp_mean=float(reps.hp_ratio_mean[-1]), hp_std=float(reps.hp_ratio_std[-1]),
                    lp_mean=float(reps.lp_ratio_mean[-1]), lp_std=float(reps.lp_ratio_std[-1]),
                    n_seeds=n_seeds)


def sweep(template: SimConfig, hp_windows: Sequence[int], lp_windows: Sequence[int],
          alphas: Sequence[float] | None = None, n_seeds: int = 200,
          arrival_probs: Sequence[float] | None = None, pairwise: bool = False,
          jobs: int = 1) -> list[SweepRow]:
    """One row per grid point, evaluated at the template's horizon.

    Invalid grid points come back as rows carrying ``error`` instead of
    stopping the sweep. Every point uses the template seed, so each row is
    what ``run_replications`` returns for that config.
    """
    alphas = [template.alpha] if alphas is None else list(alphas)
    arrival_probs = [template.arrival_prob] if arrival_probs is None else list(arrival_probs)
    points = grid_points(hp_windows, lp_windows, alphas, arrival_probs, pairwise)
    return [evaluate_point(template, *p, n_seeds=n_seeds, jobs=jobs) for p in points]


def find_optimal(rows: Iterable[SweepRow], tsrr: float) -> Optional[SweepRow]:
    """Row meeting the HP target with the best LP ratio, or None.

    Ties on the LP ratio prefer the larger HP window, then the smaller LP one.
    """
    if not 0 < tsrr <= 1:
        raise ValueError("tsrr must be in (0, 1]")
    feasible = [r for r in rows if r.ok and r.hp_mean >= tsrr]
    if not feasible:
        return None
    return max(feasible, key=lambda r: (r.lp_mean, r.rssw_start_hp, -r.rssw_start_lp))
