"""Per-station contention state machine.

A station is drawn a defer (in ranging opportunities) from its current
window, transmits one code from its class's code set, then either succeeds
or waits out T3 and backs off with a doubled, truncated window.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import CodePartition, Priority


class EmptyCodeSet(ValueError):
    pass


class Phase(enum.Enum):
    NOT_ARRIVED = "not_arrived"
    DEFERRING = "deferring"
    AWAITING_RESPONSE = "awaiting_response"
    SUCCEEDED = "succeeded"
    ABORTED = "aborted"


TERMINAL = (Phase.SUCCEEDED, Phase.ABORTED)


@dataclass
class Station:
    id: int
    priority: Priority
    current_window: int
    phase: Phase = Phase.NOT_ARRIVED
    retry_count: int = 0
    arrival_frame: Optional[int] = None
    # Deferring: global opportunity index at which the station transmits
    ready_slot: int = -1
    # AwaitingResponse: frames left on T3, and the frame the code went out
    t3_remaining: int = 0
    tx_frame: int = -1
    # Succeeded / Aborted
    final_frame: Optional[int] = None

    @property
    def done(self) -> bool:
        return self.phase in TERMINAL

    def slots_remaining(self, now_slot: int) -> int:
        return self.ready_slot - now_slot


def draw_defer(window: int, rng: np.random.Generator) -> int:
    """Uniform defer on {0, ..., window - 1}."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if window == 1:
        return 0
    return int(rng.integers(window))


def select_code(priority: Priority, partition: CodePartition, rng: np.random.Generator) -> int:
    codes = partition.codes_for(priority)
    if not codes:
        raise EmptyCodeSet(f"no ranging codes available to {priority.value}-priority stations")
    return codes[int(rng.integers(len(codes)))] if len(codes) > 1 else codes[0]


def arrive(station: Station, frame: int, defer: int, frame_slot: int) -> Station:
    station.phase = Phase.DEFERRING
    station.arrival_frame = frame
    station.ready_slot = frame_slot + defer
    return station


def await_response(station: Station, frame: int, t3_frames: int) -> Station:
    station.phase = Phase.AWAITING_RESPONSE
    station.t3_remaining = t3_frames
    station.tx_frame = frame
    return station


def on_failure(station: Station, rssw_end: int, max_retries: Optional[int],
               rng: np.random.Generator, next_slot: int = 0, frame: Optional[int] = None,
               defer: Optional[Callable[[int], int]] = None) -> Station:
    """T3 expired without a response: back off, or abort past the retry cap.

    ``next_slot`` is the first opportunity the station may use again; the new
    defer is counted from there. ``defer`` maps a window to a delay in
    opportunities and defaults to :func:`draw_defer`.
    """
    station.retry_count += 1
    if max_retries is not None and station.retry_count > max_retries:
        station.phase = Phase.ABORTED
        station.final_frame = frame
        return station
    station.current_window = min(2 * station.current_window, rssw_end)
    station.phase = Phase.DEFERRING
    delay = defer(station.current_window) if defer else draw_defer(station.current_window, rng)
    station.ready_slot = next_slot + delay
    return station


def on_success(station: Station, frame: int) -> Station:
    station.phase = Phase.SUCCEEDED
    station.final_frame = frame
    return station
