"""Deterministic contact-driven message simulation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..entropy import EntropyParams
from ..errors import ConfigInvalid, EmptyInput
from ..hotspots import (DEFAULT_CANDIDATES, GridSpec, build_grid, cell_counts,
                        optimize_grid_size, personal_weights, public_weights)
from ..protocols import PROTOCOLS, EpidemicRouter, HotenRouter, Message, SimBetRouter
from ..traces import StayPoint, StayPointParams, Trace, detect_stay_points
from .contacts import ContactEvent, extract_contacts

log = logging.getLogger(__name__)

DEFAULT_TTLS = (500.0, 1000.0, 2000.0, 4000.0, 8000.0, 15000.0)
EVENT_COLUMNS = ("time", "event", "node_a", "node_b", "msg_id", "detail")


@dataclass
class SimConfig:
    protocol: str = "hoten"
    R: float = 250.0
    tick: float = 10.0
    runtime: float = 15000.0
    ttl_sweep: Sequence[float] = DEFAULT_TTLS
    entropy: EntropyParams = field(default_factory=EntropyParams)
    grid_size: float | None = None
    grid_candidates: Sequence[float] = DEFAULT_CANDIDATES
    k_ratio: float = 0.15
    stay: StayPointParams = field(default_factory=StayPointParams)
    oracle_public: bool = False
    rng_seed: int = 42

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigInvalid(f"unknown protocol {self.protocol!r}; choose from {PROTOCOLS}")
        for name in ("R", "tick", "runtime"):
            if not getattr(self, name) > 0:
                raise ConfigInvalid(f"{name} must be positive")
        if not self.ttl_sweep:
            raise ConfigInvalid("ttl_sweep is empty")
        if any(not t > 0 for t in self.ttl_sweep):
            raise ConfigInvalid("every ttl must be positive")
        if self.grid_size is not None and not self.grid_size > 0:
            raise ConfigInvalid("grid_size must be positive")
        if self.grid_size is None and not self.grid_candidates:
            raise ConfigInvalid("grid_candidates is empty")
        if not 0 < self.k_ratio <= 1:
            raise ConfigInvalid("k_ratio must lie in (0, 1]")
        if self.rng_seed < 0:
            raise ConfigInvalid("rng_seed must be non-negative")


@dataclass
class TtlMetrics:
    ttl: float
    sent: int
    delivered: int
    expired: int
    in_flight: int
    cpdr: float
    mean_delivery_delay: float | None
    infected_ratio: float
    avg_hops: float | None
    # hop_count of the copy that reached the destination (equals avg_hops for
    # single-copy protocols, shorter for replicating ones)
    avg_path_hops: float | None = None


@dataclass
class SimMetrics:
    protocol: str
    per_ttl: dict[float, TtlMetrics]
    event_logs: dict[float, list[tuple]] = field(default_factory=dict)

    @property
    def cpdr_by_ttl(self) -> dict[float, float]:
        return {t: m.cpdr for t, m in self.per_ttl.items()}


@dataclass
class HotspotProfiles:
    grid: GridSpec
    stay_points: dict[str, list[StayPoint]]
    personal: dict[str, np.ndarray]
    counts: dict[str, int]
    public: np.ndarray
    hurst: object = None


def generate_workload(nodes: Sequence[str], t0: float = 0.0, ttl: float = float("inf")) -> list[Message]:
    """One message from every node to every other node, in canonical order."""
    nodes = sorted(nodes)
    msgs = []
    for src in nodes:
        for dst in nodes:
            if src != dst:
                msgs.append(Message(f"{src}->{dst}", src, dst, t0, ttl, 0, len(msgs)))
    return msgs


def truncate_traces(traces: Sequence[Trace], runtime: float) -> list[Trace]:
    out = []
    for tr in traces:
        cut = tr.truncated(runtime)
        if cut is not None:
            out.append(cut)
    return out


def hotspot_profiles(traces: Sequence[Trace], stay: StayPointParams = StayPointParams(),
                     grid_size: float | None = None,
                     candidates: Sequence[float] = DEFAULT_CANDIDATES) -> HotspotProfiles:
    """Stay points, grid and personal/public weights for every traced node."""
    stays = {tr.node_id: detect_stay_points(tr, stay) for tr in traces}
    everything = [p for pts in stays.values() for p in pts]
    fit = None
    if not everything:
        raise EmptyInput("no stay points detected in any trace")
    if grid_size is None:
        fit = optimize_grid_size(everything, candidates)
        grid_size = fit.d_optimized
    grid = build_grid(everything, grid_size)
    personal = {n: personal_weights(pts, grid).weights for n, pts in stays.items()}
    counts = {n: len(pts) for n, pts in stays.items()}
    public = public_weights(everything, grid).weights
    return HotspotProfiles(grid, stays, personal, counts, public, fit)


def build_router(config: SimConfig, nodes: Sequence[str], traces: Sequence[Trace]):
    if config.protocol == "epidemic":
        return EpidemicRouter(nodes)
    if config.protocol == "simbet":
        return SimBetRouter(nodes)
    try:
        prof = hotspot_profiles(traces, config.stay, config.grid_size, config.grid_candidates)
        K = prof.grid.K
        personal = {n: prof.personal.get(n, np.zeros(K)) for n in nodes}
        counts = {n: prof.counts.get(n, 0) for n in nodes}
        public = prof.public
    except EmptyInput:
        log.warning("no stay points: Hoten runs on empty profiles")
        personal = {n: np.zeros(1) for n in nodes}
        counts = {n: 0 for n in nodes}
        public = np.zeros(1)
    return HotenRouter(personal, config.entropy, config.k_ratio, masses=counts,
                       oracle_public=public if config.oracle_public else None)


def simulate(router, nodes: Sequence[str], contacts: Sequence[ContactEvent], ttl: float,
             runtime: float, t0: float = 0.0, record: bool = False) -> tuple[TtlMetrics, list[tuple]]:
    """One pass over the contact schedule for a single TTL."""
    nodes = sorted(nodes)
    states = {n: router.initial_state(n) for n in nodes}
    events: list[tuple] = []
    emit = events.append if record else (lambda row: None)

    msgs = generate_workload(nodes, t0, ttl)
    carriers = {m.id: {m.source} for m in msgs}
    transmissions = {m.id: 0 for m in msgs}
    # msg id -> (delivery time, transmissions so far, hop_count of delivered copy)
    delivered: dict[str, tuple[float, int, int]] = {}
    for m in msgs:
        states[m.source].queue[m.id] = m
        emit((t0, "create", m.source, "", m.id, ""))

    for ev in contacts:
        if ev.start > runtime:
            break
        now = ev.start
        sa, sb = states[ev.a], states[ev.b]
        emit((now, "contact", ev.a, ev.b, "", f"{ev.end:.9g}"))
        for st in (sa, sb):
            for mid in [mid for mid, m in st.queue.items() if m.expired(now)]:
                del st.queue[mid]
                emit((now, "expire", st.node_id, "", mid, ""))
        result = router.on_contact(sa, sb, now)
        for node, attrs in result.updates.items():
            for attr, value in attrs.items():
                setattr(states[node], attr, value)
        for t in result.transfers:
            src, dst = states[t.src], states[t.dst]
            moved = src.queue[t.msg_id].hopped()
            if not t.keep:
                del src.queue[t.msg_id]
            carriers[t.msg_id].add(t.dst)
            if t.msg_id not in delivered:
                transmissions[t.msg_id] += 1
            if t.kind == "deliver":
                dst.received.add(t.msg_id)
                delivered.setdefault(t.msg_id, (now, transmissions[t.msg_id], moved.hop_count))
            else:
                dst.queue[t.msg_id] = moved
            emit((now, t.kind, t.src, t.dst, t.msg_id, str(moved.hop_count)))

    sent = len(msgs)
    delays = [when - t0 for when, _, _ in delivered.values()]
    hops = [n for _, n, _ in delivered.values()]
    path_hops = [h for _, _, h in delivered.values()]
    undelivered = [m for m in msgs if m.id not in delivered]
    expired = sum(1 for m in undelivered if m.expired(runtime))
    metrics = TtlMetrics(
        ttl=float(ttl),
        sent=sent,
        delivered=len(delivered),
        expired=expired,
        in_flight=len(undelivered) - expired,
        cpdr=len(delivered) / sent if sent else 0.0,
        mean_delivery_delay=float(np.mean(delays)) if delays else None,
        infected_ratio=(float(np.mean([len(carriers[m.id]) / len(nodes) for m in msgs]))
                        if msgs else 0.0),
        avg_hops=float(np.mean(hops)) if hops else None,
        avg_path_hops=float(np.mean(path_hops)) if path_hops else None,
    )
    return metrics, events


def run(config: SimConfig, traces: Sequence[Trace], record: bool = False) -> SimMetrics:
    """Simulate ``config.protocol`` over every TTL in the sweep."""
    config.validate()
    if not traces:
        raise EmptyInput("no traces")
    nodes = sorted({tr.node_id for tr in traces})
    active = truncate_traces(traces, config.runtime)
    contacts = extract_contacts(active, config.R, config.tick, until=config.runtime)
    router = build_router(config, nodes, active)
    per_ttl, logs = {}, {}
    for ttl in sorted(set(float(t) for t in config.ttl_sweep)):
        metrics, events = simulate(router, nodes, contacts, ttl, config.runtime, record=record)
        per_ttl[ttl] = metrics
        if record:
            logs[ttl] = events
    return SimMetrics(config.protocol, per_ttl, logs)
