"""Base-station resolution of a single ranging opportunity."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Transmission:
    station_id: int
    code: int
    opportunity: int = 0


@dataclass
class OpportunityOutcome:
    detected: list[int] = field(default_factory=list)
    collided: list[int] = field(default_factory=list)
    overflow_dropped: list[int] = field(default_factory=list)

    @property
    def failed(self) -> list[int]:
        return self.collided + self.overflow_dropped


def resolve_opportunity(transmissions: Sequence[Transmission], beta: Optional[int],
                        rng: Optional[np.random.Generator] = None,
                        overflow_policy: str = "uniform") -> OpportunityOutcome:
    """Group transmitters by code and apply the detection cap.

    Any code sent by two or more stations is lost for all of them. Of the
    uniquely-coded transmitters at most ``beta`` are detected; when there are
    more, a uniform random subset is kept (``overflow_policy="uniform"``) or
    the ``beta`` lowest code indices (``"first-k-by-code-index"``).
    ``beta=None`` removes the cap.

    Station lists keep input order. The rng is only consumed on overflow.
    """
    out = OpportunityOutcome()
    if not transmissions:
        return out
    if len({t.opportunity for t in transmissions}) > 1:
        raise ValueError("transmissions span more than one opportunity")
    counts = Counter(t.code for t in transmissions)
    candidates = []
    for t in transmissions:
        if counts[t.code] > 1:
            out.collided.append(t.station_id)
        else:
            candidates.append(t)

    if beta is None or len(candidates) <= beta:
        out.detected = [t.station_id for t in candidates]
        return out

    if overflow_policy == "uniform":
        keep = set(rng.choice(len(candidates), size=beta, replace=False).tolist())
    elif overflow_policy == "first-k-by-code-index":
        order = sorted(range(len(candidates)), key=lambda k: candidates[k].code)
        keep = set(order[:beta])
    else:
        raise ValueError(f"unknown overflow policy {overflow_policy!r}")
    for k, t in enumerate(candidates):
        (out.detected if k in keep else out.overflow_dropped).append(t.station_id)
    return out
