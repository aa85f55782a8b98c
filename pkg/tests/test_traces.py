import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hoten.errors import EmptyInput, MalformedRow, UnsortedTimestamps
from hoten.traces import (GpsFix, StayPointParams, Trace, detect_stay_points, format_log,
                          parse_log, resample)


def make_trace(points, node="n1"):
    t, x, y = zip(*points)
    return Trace(node, np.array(t, float), np.array(x, float), np.array(y, float))


# -- parse_log --------------------------------------------------------------

def test_parse_minimal():
    (tr,) = parse_log(b"n1,0,0,0\nn1,10,3,4\n")
    assert tr.node_id == "n1"
    assert len(tr) == 2
    assert tr.fixes == [GpsFix(0, 0, 0), GpsFix(10, 3, 4)]


def test_parse_groups_interleaved_nodes():
    text = "node_id,timestamp_s,x_m,y_m\n# comment\nn1,0,0,0\nn2,0,5,5\nn1,10,1,1\n\nn2,20,6,6\n"
    traces = parse_log(text)
    assert [t.node_id for t in traces] == ["n1", "n2"]
    assert list(traces[0].times) == [0, 10]
    assert list(traces[1].times) == [0, 20]


def test_parse_unsorted():
    with pytest.raises(UnsortedTimestamps) as exc:
        parse_log("n1,10,0,0\nn1,5,0,0\n")
    assert exc.value.line == 2
    assert exc.value.node == "n1"


def test_parse_duplicate_timestamp_rejected():
    with pytest.raises(UnsortedTimestamps):
        parse_log("n1,10,0,0\nn1,10,1,1\n")


@pytest.mark.parametrize("text,line", [
    ("n1,0,0\n", 1),
    ("n1,0,0,0\nn1,x,0,0\n", 2),
    ("n1,0,0,0\nn1,5,nan,0\n", 2),
    ("n1,0,0,0\nn1,-5,0,0\n", 2),
    ("n1,0,0,0\n,5,0,0\n", 2),
])
def test_parse_malformed(text, line):
    with pytest.raises(MalformedRow) as exc:
        parse_log(text)
    assert exc.value.line == line


def test_parse_empty():
    with pytest.raises(EmptyInput):
        parse_log("# nothing here\n")
    with pytest.raises(EmptyInput):
        parse_log(b"node_id,timestamp_s,x_m,y_m\n")


def test_format_roundtrip():
    traces = parse_log("a,0,1.5,2\na,7,3,4\nb,1,0,0\n")
    assert parse_log(format_log(traces)) == traces


# -- stay points -------------------------------------------------------------

def test_stationary_node_one_stay_point():
    tr = make_trace([(0, 0, 0), (20, 0, 0), (40, 0, 0)])
    (sp,) = detect_stay_points(tr, StayPointParams(5, 30))
    assert (sp.x, sp.y, sp.arrival, sp.departure) == (0, 0, 0, 40)


def test_moving_node_never_dwells():
    tr = make_trace([(10 * k, 100 * k, 0) for k in range(20)])
    assert detect_stay_points(tr) == []


def test_wandering_centroid():
    # anchor (0,0); (3,0) and (0,4) are within 5 m of it, (500,500) is not
    tr = make_trace([(0, 0, 0), (30, 3, 0), (60, 0, 4), (90, 500, 500)])
    (sp,) = detect_stay_points(tr)
    assert sp.x == pytest.approx(1.0)
    assert sp.y == pytest.approx(4 / 3)
    assert (sp.arrival, sp.departure) == (0, 60)


def test_short_dwell_is_ignored():
    tr = make_trace([(0, 0, 0), (20, 1, 0), (30, 100, 0)])
    assert detect_stay_points(tr) == []


def test_two_visits():
    pts = [(t, 0, 0) for t in range(0, 50, 10)] + [(t, 300, 0) for t in range(100, 200, 10)]
    sps = detect_stay_points(make_trace(pts))
    assert [(s.x, s.arrival, s.departure) for s in sps] == [(0, 0, 40), (300, 100, 190)]


random_walks = st.lists(
    st.tuples(st.floats(0.5, 40), st.floats(-6, 6), st.floats(-6, 6)),
    min_size=1, max_size=60,
)


def _walk(steps, node="n1"):
    t, x, y = 0.0, 0.0, 0.0
    pts = [(t, x, y)]
    for dt, dx, dy in steps:
        t, x, y = t + dt, x + dx, y + dy
        pts.append((t, x, y))
    return make_trace(pts, node)


@settings(max_examples=150, deadline=None)
@given(random_walks)
def test_stay_point_output_invariants(steps):
    params = StayPointParams(5, 30)
    tr = _walk(steps)
    sps = detect_stay_points(tr, params)
    last_departure = -math.inf
    for sp in sps:
        assert sp.departure - sp.arrival >= params.time_threshold
        assert sp.arrival > last_departure
        last_departure = sp.departure
        span = (tr.times >= sp.arrival) & (tr.times <= sp.departure)
        xs, ys = tr.xs[span], tr.ys[span]
        assert sp.x == pytest.approx(xs.mean()) and sp.y == pytest.approx(ys.mean())
        # every fix is within the radius of the window's anchor, so within
        # twice the radius of the centroid
        assert np.all(np.hypot(xs - xs[0], ys - ys[0]) <= params.dist_threshold)
        assert np.all(np.hypot(xs - sp.x, ys - sp.y) <= 2 * params.dist_threshold + 1e-9)


@settings(max_examples=100, deadline=None)
@given(random_walks, st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
def test_stay_points_translation_invariant(steps, dx, dy):
    # unit-grid walks keep distances exact under integer shifts
    steps = [(dt, round(a), round(b)) for dt, a, b in steps]
    tr = _walk(steps)
    moved = Trace(tr.node_id, tr.times, tr.xs + dx, tr.ys + dy)
    a, b = detect_stay_points(tr), detect_stay_points(moved)
    assert len(a) == len(b)
    for p, q in zip(a, b):
        assert q.x == pytest.approx(p.x + dx) and q.y == pytest.approx(p.y + dy)
        assert (q.arrival, q.departure) == (p.arrival, p.departure)


@settings(max_examples=80, deadline=None)
@given(random_walks, random_walks)
def test_concatenation_unions_stay_points(first, second):
    a = _walk(first)
    b = _walk(second)
    gap = a.end + 10_000.0
    far = 1e6
    b_shift = Trace("n1", b.times + gap, b.xs + far, b.ys)
    joined = Trace("n1", np.concatenate([a.times, b_shift.times]),
                   np.concatenate([a.xs, b_shift.xs]), np.concatenate([a.ys, b_shift.ys]))
    assert detect_stay_points(joined) == detect_stay_points(a) + detect_stay_points(b_shift)


# -- resample ----------------------------------------------------------------

def test_resample_linear():
    tr = make_trace([(0, 0, 0), (10, 10, 0)])
    np.testing.assert_allclose(resample(tr, 5), [[0, 0, 0], [5, 5, 0], [10, 10, 0]])


def test_resample_single_fix():
    tr = make_trace([(7, 1, 2)])
    np.testing.assert_allclose(resample(tr, 3), [[7, 1, 2]])


def test_resample_keeps_endpoint():
    tr = make_trace([(0, 0, 0), (3, 3, 3)])
    np.testing.assert_allclose(resample(tr, 2), [[0, 0, 0], [2, 2, 2], [3, 3, 3]])


def test_resample_rejects_bad_tick():
    with pytest.raises(ValueError):
        resample(make_trace([(0, 0, 0)]), 0)


@settings(max_examples=100, deadline=None)
@given(random_walks, st.sampled_from([0.5, 1.0, 2.0, 5.0]))
def test_resample_idempotent_on_aligned_trace(steps, tick):
    tr = _walk(steps)
    once = resample(tr, tick)
    aligned = make_trace([tuple(r) for r in once])
    twice = resample(aligned, tick)
    np.testing.assert_allclose(twice, once)
    # no extrapolation beyond the window
    assert once[0, 0] == tr.start and once[-1, 0] == tr.end
