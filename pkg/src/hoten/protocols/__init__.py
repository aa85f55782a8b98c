"""Routing protocols driven by the contact simulator."""

from .base import ContactResult, Message, NodeState, Transfer
from .epidemic import EpidemicRouter, epidemic_on_contact
from .gossip import HotspotMatrix, MatrixRow, estimated_public, merge_hotspot_matrices
from .hoten import HotenRouter, hoten_on_contact
from .simbet import (EgoMatrix, SimBetRouter, simbet_betweenness, simbet_on_contact,
                     simbet_similarity, simbet_utility)

PROTOCOLS = ("hoten", "epidemic", "simbet")

__all__ = [
    "PROTOCOLS", "ContactResult", "EgoMatrix", "EpidemicRouter", "HotenRouter",
    "HotspotMatrix", "MatrixRow", "Message", "NodeState", "SimBetRouter", "Transfer",
    "epidemic_on_contact", "estimated_public", "hoten_on_contact",
    "merge_hotspot_matrices", "simbet_betweenness", "simbet_on_contact",
    "simbet_similarity", "simbet_utility",
]
