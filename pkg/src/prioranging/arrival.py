"""Geometric station arrival process."""
from __future__ import annotations

import numpy as np


def step_arrivals(frame: int, pending: list[int], p_a: float, rng: np.random.Generator) -> list[int]:
    """Draw this frame's arrivals and remove them from ``pending``.

    One uniform draw per pending station, in list order, so the arriving set
    is reproducible for a fixed rng state. Returns the arrivals in that order.
    """
    if frame < 1:
        raise ValueError("frame index starts at 1")
    if not pending:
        return []
    if p_a >= 1.0:
        arrived = list(pending)
        pending.clear()
        return arrived
    hits = rng.random(len(pending)) < p_a
    arrived = [sid for sid, hit in zip(pending, hits) if hit]
    pending[:] = [sid for sid, hit in zip(pending, hits) if not hit]
    return arrived


def expected_cumulative(U: int, p_a: float, i) -> float | np.ndarray:
    """Expected number of stations arrived by the end of frame ``i``: U * (1 - (1 - p_a)^i)."""
    if np.ndim(i):
        return U * (1.0 - (1.0 - p_a) ** np.asarray(i, dtype=float))
    if i < 1:
        raise ValueError("frame index starts at 1")
    return U * (1.0 - (1.0 - p_a) ** i)


def simulate_cumulative(U: int, p_a: float, n_frames: int, rng: np.random.Generator) -> np.ndarray:
    """Cumulative arrivals per frame 1..n_frames for one realization."""
    pending = list(range(U))
    out = np.empty(n_frames, dtype=np.int64)
    total = 0
    for frame in range(1, n_frames + 1):
        total += len(step_arrivals(frame, pending, p_a, rng))
        out[frame - 1] = total
    return out
