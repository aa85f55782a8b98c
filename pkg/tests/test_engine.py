from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hoten import report
from hoten.errors import ConfigInvalid
from hoten.protocols import EpidemicRouter, HotenRouter, SimBetRouter
from hoten.sim import ContactEvent, extract_contacts, simulate, synth_traces
from hoten.sim.engine import SimConfig, generate_workload, run
from hoten.traces import Trace

GOLDEN = Path(__file__).parent / "golden"


def epidemic_replay(nodes, contacts, ttl, runtime):
    """Temporal flooding replay written from the rules, independent of the engine.

    Returns per message: (delivery time or None, copies up to delivery,
    set of nodes that ever held it).
    """
    out = {}
    for src in sorted(nodes):
        for dst in sorted(nodes):
            if src == dst:
                continue
            holders = {src}
            copies = 0
            when = None
            for ev in contacts:
                t = ev.start
                if t > runtime or t > ttl:
                    break
                # the destination keeps what it receives and does not pass it
                # on; other holders keep spreading after delivery
                live = {ev.a, ev.b} & (holders - {dst})
                if not live or {ev.a, ev.b} <= holders:
                    continue
                (new,) = {ev.a, ev.b} - holders
                holders.add(new)
                if when is None:
                    copies += 1
                if new == dst:
                    when = t
            out[f"{src}->{dst}"] = (when, copies, holders)
    return out


def five_node_scenario():
    traces = synth_traces(5, 5, 1.2, area=1e6, duration=6000, seed=42)
    return traces, SimConfig("epidemic", runtime=6000, ttl_sweep=(500, 2000, 6000))


def test_epidemic_matches_replay_oracle():
    traces, cfg = five_node_scenario()
    nodes = sorted(tr.node_id for tr in traces)
    contacts = extract_contacts(traces, cfg.R, cfg.tick, until=cfg.runtime)
    res = run(cfg, traces)
    for ttl, m in res.per_ttl.items():
        oracle = epidemic_replay(nodes, contacts, ttl, cfg.runtime)
        done = [v for v in oracle.values() if v[0] is not None]
        assert m.delivered == len(done)
        assert m.cpdr == pytest.approx(len(done) / 20)
        assert m.mean_delivery_delay == pytest.approx(np.mean([v[0] for v in done]))
        assert m.avg_hops == pytest.approx(np.mean([v[1] for v in done]))
        assert m.infected_ratio == pytest.approx(np.mean([len(v[2]) / 5 for v in oracle.values()]))


def test_epidemic_five_node_golden():
    traces, cfg = five_node_scenario()
    text = report.render(report.METRIC_COLUMNS, report.metrics_rows([run(cfg, traces)]))
    assert text == (GOLDEN / "epidemic5_metrics.csv").read_text()


# -- workload --------------------------------------------------------------------------

def test_workload():
    msgs = generate_workload(["c", "a", "b"])
    assert len(msgs) == 6
    assert [m.id for m in msgs] == ["a->b", "a->c", "b->a", "b->c", "c->a", "c->b"]
    assert [m.seq for m in msgs] == list(range(6))
    assert generate_workload(["a"]) == []
    assert generate_workload(["c", "a", "b"]) == msgs


# -- small schedules -------------------------------------------------------------------------

def _router(kind, nodes):
    if kind == "hoten":
        return HotenRouter({n: np.array([1.0, 0.0]) if i % 2 else np.array([0.3, 0.7])
                            for i, n in enumerate(nodes)})
    if kind == "simbet":
        return SimBetRouter(nodes)
    return EpidemicRouter(nodes)


@pytest.mark.parametrize("kind", ["hoten", "simbet", "epidemic"])
def test_two_nodes_always_in_contact(kind):
    nodes = ["a", "b"]
    m, _ = simulate(_router(kind, nodes), nodes, [ContactEvent(0.0, "a", "b", 1000.0)], 500, 1000)
    assert (m.cpdr, m.avg_hops, m.mean_delivery_delay, m.infected_ratio) == (1.0, 1.0, 0.0, 1.0)


@pytest.mark.parametrize("kind", ["hoten", "simbet", "epidemic"])
def test_no_contacts(kind):
    nodes = ["a", "b", "c"]
    m, _ = simulate(_router(kind, nodes), nodes, [], 500, 1000)
    assert m.cpdr == 0 and m.mean_delivery_delay is None and m.avg_hops is None
    assert m.infected_ratio == pytest.approx(1 / 3)
    assert (m.sent, m.delivered, m.expired, m.in_flight) == (6, 0, 6, 0)


def test_expiry_is_strictly_after_ttl():
    nodes = ["a", "b"]
    on_time, _ = simulate(EpidemicRouter(nodes), nodes, [ContactEvent(100.0, "a", "b", 110.0)], 100, 200)
    late, _ = simulate(EpidemicRouter(nodes), nodes, [ContactEvent(101.0, "a", "b", 110.0)], 100, 200)
    assert on_time.cpdr == 1.0 and late.cpdr == 0.0


def test_in_flight_when_runtime_ends_first():
    nodes = ["a", "b", "c"]
    m, _ = simulate(EpidemicRouter(nodes), nodes, [ContactEvent(0.0, "a", "b", 10.0)], 5000, 1000)
    assert (m.delivered, m.expired, m.in_flight) == (2, 0, 4)


node_names = ["n0", "n1", "n2", "n3", "n4"]
schedules = st.lists(
    st.tuples(st.integers(0, 300), st.sampled_from([(a, b) for a in node_names for b in node_names if a < b])),
    max_size=40,
).map(lambda evs: sorted(ContactEvent(float(t * 10), a, b, float(t * 10 + 10)) for t, (a, b) in evs))


@settings(max_examples=60, deadline=None)
@given(schedules)
def test_schedule_invariants(contacts):
    ttls = [200.0, 800.0, 3000.0]
    runtime = 3000.0
    by_kind = {}
    for kind in ("hoten", "simbet", "epidemic"):
        router = _router(kind, node_names)
        prev = -1.0
        for ttl in ttls:
            m, events = simulate(router, node_names, contacts, ttl, runtime, record=True)
            assert m.sent == m.delivered + m.expired + m.in_flight
            assert m.cpdr >= prev
            prev = m.cpdr
            assert 0 < m.infected_ratio <= 1
            delivered = {e[4]: e[0] for e in events if e[1] == "deliver"}
            assert all(t <= ttl for t in delivered.values())
            if m.delivered:
                assert m.avg_hops >= 1
            by_kind[kind, ttl] = (set(delivered), m.infected_ratio)
    for ttl in ttls:
        flood, flood_inf = by_kind["epidemic", ttl]
        for kind in ("hoten", "simbet"):
            got, inf = by_kind[kind, ttl]
            assert got <= flood
            assert flood_inf >= inf


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        SimConfig(ttl_sweep=()).validate()
    with pytest.raises(ConfigInvalid):
        SimConfig(protocol="prophet").validate()
    with pytest.raises(ConfigInvalid):
        SimConfig(R=0).validate()
    with pytest.raises(ConfigInvalid):
        SimConfig(k_ratio=0).validate()
    SimConfig().validate()


def test_runtime_truncation_and_sweep_order():
    tr = [Trace("a", np.array([0.0, 20000.0]), np.zeros(2), np.zeros(2)),
          Trace("b", np.array([0.0, 20000.0]), np.full(2, 100.0), np.zeros(2))]
    res = run(SimConfig("epidemic", runtime=1000, ttl_sweep=(900, 100)), tr)
    assert list(res.per_ttl) == [100.0, 900.0]
    assert res.cpdr_by_ttl == {100.0: 1.0, 900.0: 1.0}


def test_hoten_run_without_stay_points():
    # straight-line movers never dwell: Hoten still runs and delivers by contact
    tr = [Trace("a", np.array([0.0, 100.0]), np.array([0.0, 1000.0]), np.zeros(2)),
          Trace("b", np.array([0.0, 100.0]), np.array([0.0, 1000.0]), np.full(2, 10.0))]
    res = run(SimConfig("hoten", runtime=100, ttl_sweep=(50,)), tr)
    assert res.per_ttl[50.0].cpdr == 1.0
