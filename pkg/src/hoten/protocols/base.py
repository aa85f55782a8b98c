"""Message and per-node routing state shared by all protocols."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Message:
    id: str
    source: str
    destination: str
    created_at: float
    ttl: float
    hop_count: int = 0
    seq: int = 0

    def expired(self, now: float) -> bool:
        return now - self.created_at > self.ttl

    def hopped(self) -> "Message":
        return Message(self.id, self.source, self.destination,
                       self.created_at, self.ttl, self.hop_count + 1, self.seq)


@dataclass
class NodeState:
    """What one node carries.

    ``queue`` maps message id to the node's copy; ``received`` holds ids of
    messages delivered to this node as their destination. ``matrix`` and
    ``ego`` are protocol control state (Hoten gossip, SimBet adjacency).
    """

    node_id: str
    queue: dict[str, Message] = field(default_factory=dict)
    received: set[str] = field(default_factory=set)
    matrix: Any = None
    ego: Any = None

    def holds(self, msg_id: str) -> bool:
        return msg_id in self.queue or msg_id in self.received

    def pending(self, now: float) -> list[Message]:
        """Unexpired messages in creation order."""
        msgs = [m for m in self.queue.values() if not m.expired(now)]
        msgs.sort(key=lambda m: (m.created_at, m.seq, m.id))
        return msgs


@dataclass(frozen=True)
class Transfer:
    """One message hand-over from ``src`` to ``dst``.

    ``kind`` is ``"deliver"`` (dst is the destination), ``"forward"`` or
    ``"copy"``. With ``keep`` the sender retains its copy (replication);
    otherwise the message moves.
    """

    kind: str
    msg_id: str
    src: str
    dst: str
    keep: bool = False


@dataclass
class ContactResult:
    transfers: list[Transfer] = field(default_factory=list)
    # node_id -> {attribute: new value}, applied by the simulator
    updates: dict[str, dict[str, Any]] = field(default_factory=dict)
