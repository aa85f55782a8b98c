"""Gossiped hotspot matrix used to estimate public hotspot weights online.

Every node keeps one row per known node: a version counter, that node's
personal weight vector, and a mass (the row's share in the column sums).
Unknown nodes are version-0 all-zero placeholders. Peers swap matrices on
contact and keep the newer version of every row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..errors import AllPlaceholders, DimensionMismatch
from ..hotspots import GridSpec, WeightVector


@dataclass(frozen=True, eq=False)
class MatrixRow:
    version: int
    weights: np.ndarray
    mass: float = 1.0

    @property
    def placeholder(self) -> bool:
        return self.version == 0


@dataclass(frozen=True, eq=False)
class HotspotMatrix:
    owner: str
    nodes: tuple[str, ...]
    K: int
    rows: Mapping[str, MatrixRow]

    @classmethod
    def initial(cls, owner: str, nodes: Sequence[str], personal,
                mass: float = 1.0, version: int = 1) -> "HotspotMatrix":
        """Own row filled in, everyone else a placeholder."""
        w = personal.weights if isinstance(personal, WeightVector) else np.asarray(personal, float)
        if version < 1:
            raise ValueError("own row needs version >= 1")
        nodes = tuple(nodes)
        if owner not in nodes:
            raise ValueError(f"owner {owner!r} not among nodes")
        blank = MatrixRow(0, np.zeros(len(w)), 0.0)
        rows = {n: blank for n in nodes}
        rows[owner] = MatrixRow(version, w, float(mass))
        return cls(owner, nodes, len(w), rows)

    def row(self, node: str) -> MatrixRow:
        return self.rows[node]

    def versions(self) -> dict[str, int]:
        return {n: self.rows[n].version for n in self.nodes}

    def known(self) -> list[str]:
        return [n for n in self.nodes if not self.rows[n].placeholder]

    def with_row(self, node: str, weights, mass: float = 1.0) -> "HotspotMatrix":
        """Replace ``node``'s row, bumping its version."""
        rows = dict(self.rows)
        rows[node] = MatrixRow(self.rows[node].version + 1, np.asarray(weights, float), float(mass))
        return HotspotMatrix(self.owner, self.nodes, self.K, rows)

    def as_array(self) -> np.ndarray:
        return np.vstack([self.rows[n].weights for n in self.nodes])


def merge_hotspot_matrices(mine: HotspotMatrix, theirs: HotspotMatrix) -> HotspotMatrix:
    """Row-wise newest-version merge; ties keep ``mine``."""
    if mine.K != theirs.K or set(mine.nodes) != set(theirs.nodes):
        raise DimensionMismatch("matrices cover different grids or node sets")
    rows = dict(mine.rows)
    changed = False
    for node in mine.nodes:
        other = theirs.rows[node]
        if other.version > rows[node].version:
            rows[node] = other
            changed = True
    if not changed:
        return mine
    return HotspotMatrix(mine.owner, mine.nodes, mine.K, rows)


def estimated_public(h: HotspotMatrix, grid: GridSpec | None = None):
    """Normalized, mass-weighted column sums of the known rows.

    With unit masses this is the plain column sum of personal weights. With
    each row's mass set to that node's stay-point count it reproduces the
    global count-based public weights once every row is known.
    """
    total = np.zeros(h.K)
    for node in h.nodes:
        row = h.rows[node]
        if not row.placeholder and row.mass:
            total += row.mass * row.weights
    s = total.sum()
    if s <= 0:
        raise AllPlaceholders("no non-placeholder row carries weight")
    total /= s
    return WeightVector(grid, total) if grid is not None else total
