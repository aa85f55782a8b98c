"""Single-copy Hoten forwarding.

On contact the two nodes first swap hotspot matrices, then each walks its
queue: messages for the peer are delivered, other messages move to the peer
when the peer's Hoten utility for the destination is strictly higher.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..entropy import EntropyParams, centrality, combine, personality, similarity
from ..errors import AllPlaceholders
from ..hotspots import WeightVector, top_k_for_ratio
from .base import ContactResult, NodeState, Transfer
from .gossip import HotspotMatrix, estimated_public, merge_hotspot_matrices


def _top_k(w: np.ndarray, k: int) -> np.ndarray:
    order = np.argsort(-w, kind="stable")
    out = np.zeros_like(w)
    out[order[:k]] = w[order[:k]]
    return out


class HotenRouter:
    """Hoten decision logic for one simulation.

    ``personal`` maps node id to its full personal weight vector and
    ``masses`` to the row mass it gossips (its stay-point count). With
    ``oracle_public`` the gossiped estimate is replaced by a fixed public
    vector.
    """

    name = "hoten"

    def __init__(self, personal: Mapping[str, np.ndarray], params: EntropyParams = EntropyParams(),
                 k_ratio: float = 0.15, masses: Mapping[str, float] | None = None,
                 oracle_public: np.ndarray | None = None):
        self.nodes = tuple(sorted(personal))
        self.personal = {n: np.asarray(_w(personal[n]), float) for n in self.nodes}
        K = {len(v) for v in self.personal.values()}
        if len(K) != 1:
            raise ValueError("personal vectors differ in length")
        self.K = K.pop()
        self.params = params
        self.k = top_k_for_ratio(self.K, k_ratio)
        self.masses = {n: float(masses[n]) if masses else 1.0 for n in self.nodes}
        self.oracle_public = None if oracle_public is None else np.asarray(_w(oracle_public), float)
        self._personality = {n: personality(v, params) for n, v in self.personal.items()}
        self._centrality: dict[tuple, float] = {}
        self._public: dict[tuple, np.ndarray | None] = {}
        self._advertised: dict[tuple, np.ndarray] = {}
        self._similarity: dict[tuple, float] = {}

    def initial_state(self, node: str) -> NodeState:
        matrix = HotspotMatrix.initial(node, self.nodes, self.personal[node], self.masses[node])
        return NodeState(node, matrix=matrix)

    def public_for(self, matrix: HotspotMatrix) -> np.ndarray | None:
        if self.oracle_public is not None:
            return self.oracle_public
        key = tuple(matrix.rows[n].version for n in matrix.nodes)
        if key not in self._public:
            try:
                self._public[key] = estimated_public(matrix)
            except AllPlaceholders:
                self._public[key] = None
        return self._public[key]

    def centrality_of(self, node: str, matrix: HotspotMatrix) -> float:
        key = (node, None) if self.oracle_public is not None else (
            node, tuple(matrix.rows[n].version for n in matrix.nodes))
        if key not in self._centrality:
            public = self.public_for(matrix)
            if public is None:
                public = np.zeros(self.K)
            self._centrality[key] = centrality(self.personal[node], public, self.params)
        return self._centrality[key]

    def advertised(self, node: str, matrix: HotspotMatrix) -> np.ndarray | None:
        row = matrix.rows[node]
        if row.placeholder:
            return None
        key = (node, row.version)
        if key not in self._advertised:
            self._advertised[key] = _top_k(row.weights, self.k)
        return self._advertised[key]

    def similarity_to(self, node: str, dest: str, matrix: HotspotMatrix) -> float | None:
        """Similarity of ``node`` to ``dest`` as seen through ``matrix``; None if unknown."""
        a = self.advertised(node, matrix)
        b = self.advertised(dest, matrix)
        if a is None or b is None:
            return None
        key = (node, matrix.rows[node].version, dest, matrix.rows[dest].version)
        if key not in self._similarity:
            self._similarity[key] = similarity(a, b, self.params)
        return self._similarity[key]

    def utilities(self, i: str, j: str, dest: str, matrix: HotspotMatrix) -> tuple[float, float]:
        """(Hoten_i(dest), Hoten_j(dest)) for the pair meeting with shared ``matrix``."""
        c_i, c_j = self.centrality_of(i, matrix), self.centrality_of(j, matrix)
        p_i, p_j = self._personality[i], self._personality[j]
        s_i = self.similarity_to(i, dest, matrix)
        s_j = self.similarity_to(j, dest, matrix)
        if s_i is None or s_j is None:
            # destination (or a carrier) not yet learned: no similarity preference
            s_i = s_j = 1.0
        u_i = combine(self.params, c_i, c_j, s_i, s_j, p_i, p_j)
        u_j = combine(self.params, c_j, c_i, s_j, s_i, p_j, p_i)
        return u_i, u_j

    def on_contact(self, a: NodeState, b: NodeState, now: float) -> ContactResult:
        return hoten_on_contact(a, b, now, self)


def _w(v):
    return v.weights if isinstance(v, WeightVector) else v


def _single_copy_pass(me: NodeState, peer: NodeState, now: float, better) -> list[Transfer]:
    out = []
    for m in me.pending(now):
        if m.destination == peer.node_id:
            out.append(Transfer("deliver", m.id, me.node_id, peer.node_id))
        elif not peer.holds(m.id) and better(m.destination):
            out.append(Transfer("forward", m.id, me.node_id, peer.node_id))
    return out


def hoten_on_contact(i: NodeState, j: NodeState, now: float, router: HotenRouter) -> ContactResult:
    mi = merge_hotspot_matrices(i.matrix, j.matrix)
    mj = merge_hotspot_matrices(j.matrix, i.matrix)

    def i_to_j(dest):
        u_i, u_j = router.utilities(i.node_id, j.node_id, dest, mi)
        return u_i < u_j

    def j_to_i(dest):
        u_j, u_i = router.utilities(j.node_id, i.node_id, dest, mj)
        return u_j < u_i

    transfers = _single_copy_pass(i, j, now, i_to_j) + _single_copy_pass(j, i, now, j_to_i)
    return ContactResult(transfers, {i.node_id: {"matrix": mi}, j.node_id: {"matrix": mj}})
