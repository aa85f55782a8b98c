"""Contact intervals from trajectories under a fixed transmission range."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..traces import Trace


@dataclass(frozen=True, order=True)
class ContactEvent:
    start: float
    a: str
    b: str
    end: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("contact endpoints must be in canonical order (a < b)")
        if not self.end > self.start:
            raise ValueError("contact must have positive length")

    @property
    def duration(self) -> float:
        return self.end - self.start


def tick_grid(traces: Sequence[Trace], tick: float, until: float | None = None) -> np.ndarray:
    t0 = min(tr.start for tr in traces)
    t1 = max(tr.end for tr in traces)
    if until is not None:
        t1 = min(t1, until)
    if t1 < t0:
        return np.empty(0)
    n = int(math.floor((t1 - t0) / tick + 1e-9)) + 1
    return t0 + tick * np.arange(n)


def positions_on(trace: Trace, ticks: np.ndarray) -> np.ndarray:
    """(len(ticks), 2) positions, NaN outside the trace's active window."""
    out = np.full((len(ticks), 2), np.nan)
    inside = (ticks >= trace.start) & (ticks <= trace.end)
    out[inside, 0] = np.interp(ticks[inside], trace.times, trace.xs)
    out[inside, 1] = np.interp(ticks[inside], trace.times, trace.ys)
    return out


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive (first, last) index pairs of maximal True runs."""
    padded = np.concatenate([[False], mask, [False]])
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return [(int(s), int(e) - 1) for s, e in zip(edges[::2], edges[1::2])]


def extract_contacts(traces: Sequence[Trace], R: float = 250.0, tick: float = 10.0,
                     until: float | None = None) -> list[ContactEvent]:
    """Maximal in-range runs per node pair on a shared tick clock.

    A run of in-range ticks ``first..last`` becomes the interval
    ``[first, last + tick)``. Events are sorted by start, then pair.
    """
    if not tick > 0 or not R > 0:
        raise ValueError("R and tick must be positive")
    traces = sorted(traces, key=lambda tr: tr.node_id)
    if len(traces) < 2:
        return []
    ticks = tick_grid(traces, tick, until)
    pos = {tr.node_id: positions_on(tr, ticks) for tr in traces}
    events = []
    for ia, ta in enumerate(traces):
        pa = pos[ta.node_id]
        for tb in traces[ia + 1:]:
            pb = pos[tb.node_id]
            with np.errstate(invalid="ignore"):
                near = np.hypot(pa[:, 0] - pb[:, 0], pa[:, 1] - pb[:, 1]) <= R
            for first, last in _runs(near):
                events.append(ContactEvent(float(ticks[first]), ta.node_id, tb.node_id,
                                           float(ticks[last] + tick)))
    events.sort()
    return events
