"""Square-grid hotspots: public/personal weights, top-k truncation,
visited-hotspot ratio and Hurst-based grid-size selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstantSeries, EmptyInput, NoUsableCandidate, OutOfGrid, SeriesTooShort
from .hurst import hurst_aggregated_variance
from .traces import StayPoint

DEFAULT_CANDIDATES = (25.0, 50.0, 75.0, 100.0, 150.0, 200.0, 300.0, 400.0, 500.0)


@dataclass(frozen=True)
class GridSpec:
    origin_x: float
    origin_y: float
    cell_size: float
    cols: int
    rows: int

    def __post_init__(self):
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        if self.cols < 1 or self.rows < 1:
            raise ValueError("grid needs at least one row and one column")

    @property
    def K(self) -> int:
        return self.cols * self.rows

    def cell_of(self, x: float, y: float) -> int:
        col = math.floor((x - self.origin_x) / self.cell_size)
        row = math.floor((y - self.origin_y) / self.cell_size)
        if not (0 <= col < self.cols and 0 <= row < self.rows):
            raise OutOfGrid((x, y))
        return row * self.cols + col

    def cells_of(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        cols = np.floor((xs - self.origin_x) / self.cell_size).astype(np.int64)
        rows = np.floor((ys - self.origin_y) / self.cell_size).astype(np.int64)
        bad = (cols < 0) | (cols >= self.cols) | (rows < 0) | (rows >= self.rows)
        if bad.any():
            k = int(np.argmax(bad))
            raise OutOfGrid((float(xs[k]), float(ys[k])))
        return rows * self.cols + cols

    def center(self, cell: int) -> tuple[float, float]:
        row, col = divmod(cell, self.cols)
        return (self.origin_x + (col + 0.5) * self.cell_size,
                self.origin_y + (row + 0.5) * self.cell_size)


@dataclass(frozen=True, eq=False)
class WeightVector:
    grid: GridSpec
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.grid.K,):
            raise ValueError(f"expected {self.grid.K} weights, got shape {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> float:
        return float(self.weights.sum())


@dataclass
class HurstFit:
    d_candidates: list[float]
    h_values: list[float]
    d_optimized: float
    h_max: float
    skipped: list[tuple[float, str]] = field(default_factory=list)


def build_grid(stay_points: Sequence[StayPoint], d: float) -> GridSpec:
    if not stay_points:
        raise EmptyInput("cannot build a grid without stay points")
    if not d > 0:
        raise ValueError("cell size must be positive")
    xs = np.array([p.x for p in stay_points])
    ys = np.array([p.y for p in stay_points])
    ox, oy = float(xs.min()), float(ys.min())
    cols = math.floor((xs.max() - ox) / d) + 1
    rows = math.floor((ys.max() - oy) / d) + 1
    return GridSpec(ox, oy, float(d), int(cols), int(rows))


def cell_counts(stay_points: Sequence[StayPoint], grid: GridSpec) -> np.ndarray:
    if not stay_points:
        return np.zeros(grid.K, dtype=np.int64)
    cells = grid.cells_of([p.x for p in stay_points], [p.y for p in stay_points])
    return np.bincount(cells, minlength=grid.K)


def _normalized(counts: np.ndarray, grid: GridSpec) -> WeightVector:
    total = counts.sum()
    if total == 0:
        return WeightVector(grid, np.zeros(grid.K))
    return WeightVector(grid, counts / total)


def public_weights(stay_points: Sequence[StayPoint], grid: GridSpec) -> WeightVector:
    """Share of all stay points falling in each cell."""
    if not stay_points:
        raise EmptyInput("no stay points")
    return _normalized(cell_counts(stay_points, grid), grid)


def personal_weights(stay_points: Sequence[StayPoint], grid: GridSpec) -> WeightVector:
    """Like :func:`public_weights` for a single node's stay points.

    A node without stay points gets the all-zero vector.
    """
    nodes = {p.node_id for p in stay_points}
    if len(nodes) > 1:
        raise ValueError(f"stay points from several nodes: {sorted(nodes)}")
    return _normalized(cell_counts(stay_points, grid), grid)


def truncate_top_k(w: WeightVector, k: int) -> WeightVector:
    """Keep the k largest weights (lower index wins ties); no renormalization."""
    K = len(w)
    if not 1 <= k <= K:
        raise ValueError(f"k must lie in [1, {K}], got {k}")
    order = np.argsort(-w.weights, kind="stable")
    out = np.zeros(K)
    keep = order[:k]
    out[keep] = w.weights[keep]
    return WeightVector(w.grid, out)


def top_k_for_ratio(K: int, ratio: float) -> int:
    return max(1, min(K, math.ceil(ratio * K - 1e-9)))


def visited_ratio(w: WeightVector, confidence: float = 0.9) -> float:
    """Fraction of cells needed, heaviest first, to reach ``confidence`` weight."""
    if not 0 < confidence <= 1:
        raise ValueError("confidence must lie in (0, 1]")
    K = len(w)
    csum = np.cumsum(np.sort(w.weights)[::-1])
    # cumulative float sums of e.g. ten 0.1s land just under 0.9
    hit = np.nonzero(csum >= confidence - 1e-12)[0]
    k_star = int(hit[0]) + 1 if hit.size else K
    return k_star / K


def grid_count_series(stay_points: Sequence[StayPoint], d: float) -> np.ndarray:
    grid = build_grid(stay_points, d)
    return cell_counts(stay_points, grid).astype(float)


def optimize_grid_size(stay_points: Sequence[StayPoint],
                       candidates: Iterable[float] = DEFAULT_CANDIDATES) -> HurstFit:
    """Pick the cell size whose row-major count series has the largest Hurst parameter.

    Candidates whose series is too short or constant are skipped and listed
    in ``HurstFit.skipped``. Ties go to the smaller cell size.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("candidate set is empty")
    if not stay_points:
        raise EmptyInput("no stay points")
    ds, hs, skipped = [], [], []
    for d in candidates:
        try:
            h = hurst_aggregated_variance(grid_count_series(stay_points, d))
        except (SeriesTooShort, ConstantSeries) as exc:
            skipped.append((float(d), type(exc).__name__))
            continue
        ds.append(float(d))
        hs.append(h)
    if not ds:
        raise NoUsableCandidate(f"no usable grid size among {candidates}")
    best = max(range(len(ds)), key=lambda i: (hs[i], -ds[i]))
    return HurstFit(ds, hs, ds[best], hs[best], skipped)
