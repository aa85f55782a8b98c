"""SimBet comparator: ego-network betweenness plus common-neighbour
similarity, single-copy forwarding.

Each node keeps a binary adjacency matrix over all nodes. On contact the two
nodes record their link and swap direct-neighbour lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..entropy import share
from .base import ContactResult, NodeState, Transfer


@dataclass(frozen=True, eq=False)
class EgoMatrix:
    nodes: tuple[str, ...]
    adjacency: np.ndarray

    @classmethod
    def empty(cls, nodes: Sequence[str]) -> "EgoMatrix":
        nodes = tuple(nodes)
        return cls(nodes, np.zeros((len(nodes), len(nodes)), dtype=bool))

    @classmethod
    def from_edges(cls, nodes: Sequence[str], edges) -> "EgoMatrix":
        ego = cls.empty(nodes)
        a = ego.adjacency
        idx = ego.index
        for u, v in edges:
            a[idx(u), idx(v)] = a[idx(v), idx(u)] = True
        return ego

    def index(self, node: str) -> int:
        return self.nodes.index(node)

    def neighbours(self, node: str) -> np.ndarray:
        return self.adjacency[self.index(node)]

    def with_contact(self, me: str, peer: str, peer_neighbours: np.ndarray) -> "EgoMatrix":
        """Record the link me-peer and everything peer reports about itself."""
        a = self.adjacency.copy()
        p, m = self.index(peer), self.index(me)
        a[m, p] = a[p, m] = True
        a[p, :] |= peer_neighbours
        a[:, p] |= peer_neighbours
        np.fill_diagonal(a, False)
        return EgoMatrix(self.nodes, a)


def simbet_betweenness(ego: EgoMatrix, self_id: str) -> float:
    """Sum of A^2 over non-adjacent pairs of ``self_id``'s direct contacts.

    The ego network is ``self_id`` plus its direct contacts, with the links
    among them known from exchanged neighbour lists.
    """
    s = ego.index(self_id)
    members = np.flatnonzero(ego.adjacency[s])
    if len(members) < 2:
        return 0.0
    sub = ego.adjacency[np.ix_(members, members)].astype(np.int64)
    # paths through self count too: every member is adjacent to it
    sq = sub @ sub + 1
    iu = np.triu_indices(len(members), k=1)
    gaps = sub[iu] == 0
    return float(sq[iu][gaps].sum())


def simbet_similarity(ego: EgoMatrix, self_id: str, dest: str) -> int:
    """Common neighbours of ``self_id`` and ``dest`` in ``self_id``'s matrix."""
    return int(np.count_nonzero(ego.neighbours(self_id) & ego.neighbours(dest)))


def simbet_utility(bet_i: float, bet_j: float, sim_i: float, sim_j: float) -> float:
    return 0.5 * share(bet_i, bet_j) + 0.5 * share(sim_i, sim_j)


def simbet_on_contact(i: NodeState, j: NodeState, now: float) -> ContactResult:
    ei = i.ego.with_contact(i.node_id, j.node_id, j.ego.neighbours(j.node_id))
    ej = j.ego.with_contact(j.node_id, i.node_id, i.ego.neighbours(i.node_id))
    bet_i = simbet_betweenness(ei, i.node_id)
    bet_j = simbet_betweenness(ej, j.node_id)

    def passes(me, peer, e_me, e_peer, bet_me, bet_peer):
        out = []
        for m in me.pending(now):
            if m.destination == peer.node_id:
                out.append(Transfer("deliver", m.id, me.node_id, peer.node_id))
            elif not peer.holds(m.id):
                s_me = simbet_similarity(e_me, me.node_id, m.destination)
                s_peer = simbet_similarity(e_peer, peer.node_id, m.destination)
                u_me = simbet_utility(bet_me, bet_peer, s_me, s_peer)
                u_peer = simbet_utility(bet_peer, bet_me, s_peer, s_me)
                if u_peer > u_me:
                    out.append(Transfer("forward", m.id, me.node_id, peer.node_id))
        return out

    transfers = passes(i, j, ei, ej, bet_i, bet_j) + passes(j, i, ej, ei, bet_j, bet_i)
    return ContactResult(transfers, {i.node_id: {"ego": ei}, j.node_id: {"ego": ej}})


class SimBetRouter:
    name = "simbet"

    def __init__(self, nodes):
        self.nodes = tuple(sorted(nodes))

    def initial_state(self, node: str) -> NodeState:
        return NodeState(node, ego=EgoMatrix.empty(self.nodes))

    def on_contact(self, a: NodeState, b: NodeState, now: float) -> ContactResult:
        return simbet_on_contact(a, b, now)
