"""Epidemic flooding: on contact each side replicates every live message the
other lacks."""

from __future__ import annotations

from .base import ContactResult, NodeState, Transfer


def _flood(me: NodeState, peer: NodeState, now: float) -> list[Transfer]:
    out = []
    for m in me.pending(now):
        if peer.holds(m.id):
            continue
        kind = "deliver" if m.destination == peer.node_id else "copy"
        out.append(Transfer(kind, m.id, me.node_id, peer.node_id, keep=True))
    return out


def epidemic_on_contact(i: NodeState, j: NodeState, now: float) -> ContactResult:
    return ContactResult(_flood(i, j, now) + _flood(j, i, now))


class EpidemicRouter:
    name = "epidemic"

    def __init__(self, nodes=()):
        self.nodes = tuple(sorted(nodes))

    def initial_state(self, node: str) -> NodeState:
        return NodeState(node)

    def on_contact(self, a: NodeState, b: NodeState, now: float) -> ContactResult:
        return epidemic_on_contact(a, b, now)
