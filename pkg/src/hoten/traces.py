"""GPS log parsing, stay-point detection and uniform resampling.

Coordinates are planar meters, timestamps are seconds relative to the
experiment start. The log format is one fix per CSV row::

    node_id,timestamp_s,x_m,y_m

with an optional header row and ``#`` comment lines.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput, MalformedRow, UnsortedTimestamps


@dataclass(frozen=True)
class GpsFix:
    timestamp: float
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.timestamp) and self.timestamp >= 0):
            raise ValueError(f"invalid timestamp {self.timestamp!r}")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate ({self.x!r}, {self.y!r})")


@dataclass(frozen=True, eq=False)
class Trace:
    """One node's trajectory, stored column-wise.

    ``times`` is strictly increasing and non-empty.
    """

    node_id: str
    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        for name in ("times", "xs", "ys"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.times)
        if n == 0:
            raise EmptyInput(f"trace {self.node_id!r} has no fixes")
        if len(self.xs) != n or len(self.ys) != n:
            raise ValueError("times, xs and ys must have equal length")
        if not (np.all(np.isfinite(self.times)) and np.all(np.isfinite(self.xs))
                and np.all(np.isfinite(self.ys))):
            raise ValueError(f"trace {self.node_id!r} contains non-finite values")
        if self.times[0] < 0:
            raise ValueError(f"trace {self.node_id!r} has a negative timestamp")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError(f"trace {self.node_id!r} timestamps not strictly increasing")

    @classmethod
    def from_fixes(cls, node_id: str, fixes: Iterable[GpsFix]) -> "Trace":
        fixes = list(fixes)
        return cls(
            node_id,
            np.array([f.timestamp for f in fixes], dtype=float),
            np.array([f.x for f in fixes], dtype=float),
            np.array([f.y for f in fixes], dtype=float),
        )

    @property
    def fixes(self) -> list[GpsFix]:
        return [GpsFix(float(t), float(x), float(y))
                for t, x, y in zip(self.times, self.xs, self.ys)]

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    def __len__(self) -> int:
        return len(self.times)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return (self.node_id == other.node_id
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.xs, other.xs)
                and np.array_equal(self.ys, other.ys))

    def truncated(self, until: float) -> "Trace | None":
        """Fixes with timestamp <= ``until``; None when nothing remains."""
        keep = self.times <= until
        if not keep.any():
            return None
        return Trace(self.node_id, self.times[keep], self.xs[keep], self.ys[keep])


@dataclass(frozen=True)
class StayPoint:
    node_id: str
    x: float
    y: float
    arrival: float
    departure: float

    @property
    def duration(self) -> float:
        return self.departure - self.arrival


@dataclass(frozen=True)
class StayPointParams:
    dist_threshold: float = 5.0
    time_threshold: float = 30.0

    def __post_init__(self):
        if not (self.dist_threshold > 0 and self.time_threshold > 0):
            raise ValueError("stay-point thresholds must be strictly positive")


def _parse_float(text: str, line: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(line, f"{what} {text!r} is not a number") from None
    if not math.isfinite(value):
        raise MalformedRow(line, f"{what} is not finite")
    return value


def parse_log(data: bytes | str) -> list[Trace]:
    """Parse a GPS log into one :class:`Trace` per node, in order of first appearance."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    rows: dict[str, list[tuple[float, float, float]]] = {}
    seen_data = False
    for lineno, row in enumerate(csv.reader(io.StringIO(data)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        if len(row) != 4:
            raise MalformedRow(lineno, f"expected 4 fields, got {len(row)}")
        node, ts, xs, ys = (cell.strip() for cell in row)
        if not seen_data:
            seen_data = True
            try:
                float(ts)
            except ValueError:
                # header row
                continue
        if not node:
            raise MalformedRow(lineno, "empty node_id")
        t = _parse_float(ts, lineno, "timestamp")
        if t < 0:
            raise MalformedRow(lineno, "negative timestamp")
        x = _parse_float(xs, lineno, "x")
        y = _parse_float(ys, lineno, "y")
        fixes = rows.setdefault(node, [])
        if fixes and t <= fixes[-1][0]:
            raise UnsortedTimestamps(node, lineno)
        fixes.append((t, x, y))
    if not rows:
        raise EmptyInput("log contains no fixes")
    traces = []
    for node, fixes in rows.items():
        arr = np.array(fixes, dtype=float)
        traces.append(Trace(node, arr[:, 0], arr[:, 1], arr[:, 2]))
    return traces


def read_log(path) -> list[Trace]:
    with open(path, "rb") as fh:
        return parse_log(fh.read())


def format_log(traces: Sequence[Trace]) -> str:
    out = io.StringIO()
    out.write("node_id,timestamp_s,x_m,y_m\n")
    for tr in traces:
        for t, x, y in zip(tr.times, tr.xs, tr.ys):
            out.write(f"{tr.node_id},{t:.9g},{x:.9g},{y:.9g}\n")
    return out.getvalue()


def detect_stay_points(trace: Trace, params: StayPointParams = StayPointParams()) -> list[StayPoint]:
    """Sliding-anchor stay-point scan.

    From anchor fix ``i`` the window grows while fixes stay within
    ``dist_threshold`` of the anchor. A window lasting at least
    ``time_threshold`` becomes a stay point at the centroid of its fixes and
    the scan resumes after it; otherwise the anchor advances by one.
    """
    t, x, y = trace.times, trace.xs, trace.ys
    n = len(t)
    out: list[StayPoint] = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and math.hypot(x[j] - x[i], y[j] - y[i]) <= params.dist_threshold:
            j += 1
        if t[j - 1] - t[i] >= params.time_threshold:
            out.append(StayPoint(
                trace.node_id,
                float(np.mean(x[i:j])),
                float(np.mean(y[i:j])),
                float(t[i]),
                float(t[j - 1]),
            ))
            i = j
        else:
            i += 1
    return out


def resample(trace: Trace, tick: float) -> np.ndarray:
    """Positions on a uniform clock starting at the first fix.

    Returns an ``(m, 3)`` array of ``(timestamp, x, y)``. The last fix time is
    always included, even when it falls between ticks.
    """
    if not tick > 0:
        raise ValueError("tick must be positive")
    t0, t1 = trace.start, trace.end
    steps = int(math.floor((t1 - t0) / tick + 1e-9))
    ts = t0 + tick * np.arange(steps + 1)
    ts = ts[ts <= t1]
    if ts[-1] < t1:
        ts = np.append(ts, t1)
    return np.column_stack([ts, np.interp(ts, trace.times, trace.xs),
                            np.interp(ts, trace.times, trace.ys)])
