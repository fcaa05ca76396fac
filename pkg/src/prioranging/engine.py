"""Frame-by-frame simulation loop and seed replications.

Global opportunity ``g`` belongs to frame ``g // opportunities_per_frame + 1``.
Deferring stations are kept in a schedule keyed by the opportunity at which
their defer counter reaches zero, which is equivalent to decrementing every
counter once per opportunity but costs nothing for idle opportunities.
"""
from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arrival import step_arrivals
from .channel import Transmission, resolve_opportunity
from .core import Priority, SimConfig, partition_codes, validate
from .station import (Phase, Station, arrive, await_response, draw_defer, on_failure,
                      on_success, select_code)


@dataclass
class MetricsSeries:
    """Per-frame cumulative counts for one run; index 0 is frame 1."""

    hp_arrived: np.ndarray
    hp_succeeded: np.ndarray
    lp_arrived: np.ndarray
    lp_succeeded: np.ndarray
    config: Optional[SimConfig] = None

    @property
    def frames(self) -> np.ndarray:
        return np.arange(1, len(self.hp_arrived) + 1)

    @property
    def hp_ratio(self) -> np.ndarray:
        return _ratio(self.hp_succeeded, self.hp_arrived)

    @property
    def lp_ratio(self) -> np.ndarray:
        return _ratio(self.lp_succeeded, self.lp_arrived)

    def ratio(self, priority: Priority) -> np.ndarray:
        return self.hp_ratio if priority is Priority.HIGH else self.lp_ratio


def _ratio(num, den) -> np.ndarray:
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


class Simulation:
    """Stepwise run of one configuration. ``run`` is the usual entry point."""

    def __init__(self, config: SimConfig):
        self.config = c = validate(config)
        self.rng = np.random.default_rng(c.seed)
        self.partition = partition_codes(c.n_codes, c.alpha)
        self.stations = [
            Station(sid, c.priority_of(sid), c.rssw_start(c.priority_of(sid)))
            for sid in range(c.total_stations)
        ]
        self.pending = list(range(c.total_stations))
        self.schedule: dict[int, list[int]] = defaultdict(list)
        self.awaiting: list[int] = []
        self.frame = 0
        self.arrived = {Priority.HIGH: 0, Priority.LOW: 0}
        self.succeeded = {Priority.HIGH: 0, Priority.LOW: 0}
        self._responses: list[int] = []  # detected, success counted next frame

    def phase_counts(self) -> dict[Phase, int]:
        counts = dict.fromkeys(Phase, 0)
        for s in self.stations:
            counts[s.phase] += 1
        return counts

    def _defer(self, window: int) -> int:
        """Opportunities to wait from the first opportunity of a frame."""
        c = self.config
        if c.defer_unit == "opportunity":
            return draw_defer(window, self.rng)
        frames = draw_defer(window, self.rng)
        return frames * c.opportunities_per_frame + draw_defer(c.opportunities_per_frame, self.rng)

    def _count_success(self, sid: int) -> None:
        self.succeeded[self.stations[sid].priority] += 1

    def step(self) -> None:
        c, rng = self.config, self.rng
        self.frame += 1
        frame = self.frame
        opps = c.opportunities_per_frame
        base = (frame - 1) * opps

        for sid in step_arrivals(frame, self.pending, c.arrival_prob, rng):
            st = self.stations[sid]
            defer = 0 if c.initial_defer == "immediate" else self._defer(st.current_window)
            arrive(st, frame, defer, base)
            self.schedule[st.ready_slot].append(sid)
            self.arrived[st.priority] += 1

        for slot in range(base, base + opps):
            ids = self.schedule.pop(slot, None)
            if not ids:
                continue
            ids.sort()
            txs = [Transmission(sid, select_code(self.stations[sid].priority, self.partition, rng), slot)
                   for sid in ids]
            outcome = resolve_opportunity(txs, c.beta, rng, c.overflow_policy)
            for sid in outcome.detected:
                st = self.stations[sid]
                if c.success_at == "transmit":
                    on_success(st, frame)
                    self._count_success(sid)
                else:
                    await_response(st, frame, 0)
                    self._responses.append(sid)
            for sid in outcome.failed:
                await_response(self.stations[sid], frame, c.t3_frames)
                self.awaiting.append(sid)

        # frame end: RNG-RSP receipt for last frame's detections, then T3 timers
        if self._responses:
            due = [sid for sid in self._responses if self.stations[sid].tx_frame < frame]
            self._responses = [sid for sid in self._responses if self.stations[sid].tx_frame == frame]
            for sid in sorted(due):
                on_success(self.stations[sid], frame)
                self._count_success(sid)

        still = []
        next_slot = base + opps
        for sid in sorted(self.awaiting):
            st = self.stations[sid]
            if c.t3_inclusive or st.tx_frame < frame:
                st.t3_remaining -= 1
            if st.t3_remaining > 0:
                still.append(sid)
                continue
            on_failure(st, c.rssw_end, c.max_retries, rng, next_slot=next_slot, frame=frame,
                       defer=self._defer)
            if st.phase is Phase.DEFERRING:
                self.schedule[st.ready_slot].append(sid)
        self.awaiting = still

    def run(self) -> MetricsSeries:
        n = self.config.n_frames
        cols = np.zeros((4, n), dtype=np.int64)
        for k in range(n):
            self.step()
            cols[:, k] = (self.arrived[Priority.HIGH], self.succeeded[Priority.HIGH],
                          self.arrived[Priority.LOW], self.succeeded[Priority.LOW])
        return MetricsSeries(*cols, config=self.config)


def run(config: SimConfig) -> MetricsSeries:
    return Simulation(config).run()


def replication_seed(seed: int, index: int) -> int:
    """Seed of replication ``index``; replication 0 reuses the base seed."""
    if index == 0:
        return seed
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


@dataclass
class Replications:
    """Per-frame mean and sample std across seeds (std is 0 for a single seed)."""

    n_seeds: int
    hp_arrived: np.ndarray
    hp_succeeded: np.ndarray
    lp_arrived: np.ndarray
    lp_succeeded: np.ndarray
    hp_ratio_mean: np.ndarray
    hp_ratio_std: np.ndarray
    lp_ratio_mean: np.ndarray
    lp_ratio_std: np.ndarray
    config: Optional[SimConfig] = None
    runs: list = field(default_factory=list, repr=False)

    @property
    def frames(self) -> np.ndarray:
        return np.arange(1, len(self.hp_ratio_mean) + 1)


def _run_one(args) -> MetricsSeries:
    config, index = args
    series = run(config.replace(seed=replication_seed(config.seed, index)))
    series.config = None  # keep pickles small
    return series


def run_replications(config: SimConfig, n_seeds: int, jobs: int = 1,
                     keep_runs: bool = False) -> Replications:
    """Run ``n_seeds`` independent replications and aggregate them.

    Results are merged in replication-index order, so the aggregate does not
    depend on ``jobs``.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    validate(config)
    tasks = [(config, i) for i in range(n_seeds)]
    if jobs > 1 and n_seeds > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_run_one, tasks, chunksize=max(1, n_seeds // (4 * jobs))))
    else:
        runs = [_run_one(t) for t in tasks]

    def stack(name):
        return np.stack([getattr(r, name) for r in runs]).astype(float)

    hp = stack("hp_ratio")
    lp = stack("lp_ratio")
    ddof = 1 if n_seeds > 1 else 0
    return Replications(
        n_seeds=n_seeds,
        hp_arrived=stack("hp_arrived").mean(axis=0),
        hp_succeeded=stack("hp_succeeded").mean(axis=0),
        lp_arrived=stack("lp_arrived").mean(axis=0),
        lp_succeeded=stack("lp_succeeded").mean(axis=0),
        hp_ratio_mean=hp.mean(axis=0),
        hp_ratio_std=hp.std(axis=0, ddof=ddof),
        lp_ratio_mean=lp.mean(axis=0),
        lp_ratio_std=lp.std(axis=0, ddof=ddof),
        config=config,
        runs=runs if keep_runs else [],
    )


def final_ratios(config: SimConfig, n_seeds: int, jobs: int = 1) -> tuple[float, float]:
    """Mean HP and LP success ratio at the horizon."""
    reps = run_replications(config, n_seeds, jobs)
    return float(reps.hp_ratio_mean[-1]), float(reps.lp_ratio_mean[-1])


__all__ = ["MetricsSeries", "Replications", "Simulation", "final_ratios", "replication_seed",
           "run", "run_replications"]
