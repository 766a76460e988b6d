from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cfpgn.cf import expand, from_quotients
from cfpgn.envelope import (
    EXCEEDS_DEPTH,
    GraphError,
    build_graph,
    decode,
    evaluate_graph,
    interval_local_maxima,
    l1_local_maxima,
    ordered_envelope,
    segment_slope,
)
from cfpgn.exact import LatticePoint, LogCoord, ZERO
from cfpgn.trajectory import Trajectory, evaluate

unit_half = st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=3000)
quotient_lists = st.lists(st.integers(1, 40), min_size=1, max_size=10).map(lambda qs: [qs[0] + 1] + qs[1:])

# q-maxima as ratios e^{2q}; each q_n sits where x_{n-1} rising meets x_n falling,
# i.e. ratio Q_n / Delta_{n-1}.  Cross-checked against brute_minima in test_oracle.
Q_MAXIMA = {
    Fraction(0): [1],
    Fraction(1, 2): [1, 4],
    Fraction(3, 7): [1, Fraction(14, 3), 49],
    Fraction(2, 5): [1, 5, 25],
    Fraction(16, 113): [1, Fraction(791, 16), 12769],
}


@pytest.mark.parametrize("xi", sorted(Q_MAXIMA))
def test_q_maxima(xi):
    g = build_graph(xi)
    assert [q.ratio for q in g.q_maxima] == Q_MAXIMA[xi]
    assert [q.ratio for q in l1_local_maxima(g)] == Q_MAXIMA[xi]


def test_graph_3_7_vertices():
    g = build_graph(Fraction(3, 7))
    assert [v.q.ratio for v in g.L1.vertices] == [1, Fraction(7, 3), Fraction(14, 3), 14, 49]
    assert g.L1.slopes() + [g.L1.tail_slope] == [-1, 1, -1, 1, -1]
    assert g.interval_max_counts == (2, 3)
    assert g.s_detected == 3 and not g.truncated
    assert g.L1.owners()[0] == LatticePoint(1, 0)


def test_graph_zero():
    g = build_graph(Fraction(0))
    assert g.L1.vertices[0].v == ZERO
    assert g.L1.tail_slope == -1 and g.L2.tail_slope == 1
    assert str(decode(g)) == "[0]"


@given(unit_half)
@settings(max_examples=300)
def test_decode_roundtrip(xi):
    assert decode(build_graph(xi)) == expand(xi)


@given(quotient_lists)
def test_decode_from_quotients(qs):
    cf = from_quotients(qs)
    got = decode(build_graph(cf.value))
    assert got.quotients == cf.quotients


@given(unit_half)
def test_slopes_are_unit(xi):
    g = build_graph(xi)
    for L in (g.L1, g.L2):
        assert set(L.slopes()) <= {-1, 1}
        assert L.tail_slope in (-1, 1)


@given(unit_half)
def test_counts_match_quotients(xi):
    g = build_graph(xi)
    assert g.interval_max_counts == expand(xi).quotients
    for n in range(1, g.intervals + 1):
        assert len(interval_local_maxima(g, n)) == g.interval_max_counts[n - 1]


@given(unit_half)
def test_l1_is_convergent_envelope(xi):
    # L1 is the lower envelope of the convergent trajectories
    g = build_graph(xi)
    trajs = [Trajectory(p, xi) for p in g.table.points()]
    for v in g.L1.vertices:
        assert v.v == min(evaluate(t, v.q) for t in trajs)


def test_truncation():
    xi = from_quotients([2] * 10).value
    g = build_graph(xi, depth=4)
    assert g.truncated and g.s_detected == EXCEEDS_DEPTH
    assert g.L1.tail_slope is None and g.L1.truncated
    assert g.intervals == 4
    part = decode(g)
    assert part.partial and part.quotients == (2, 2, 2, 2)
    assert build_graph(xi, depth=10).s_detected == 11


def test_depth_env(monkeypatch):
    xi = from_quotients([2] * 10).value
    monkeypatch.setenv("CFPGN_DEPTH", "3")
    assert build_graph(xi).intervals == 3
    monkeypatch.setenv("CFPGN_DEPTH", "0")
    with pytest.raises(GraphError):
        build_graph(xi)


def test_depth_must_be_positive():
    with pytest.raises(GraphError):
        build_graph(Fraction(1, 3), depth=0)


def test_evaluate_graph_negative_q():
    with pytest.raises(GraphError):
        evaluate_graph(build_graph(Fraction(1, 3)), LogCoord(Fraction(1, 2)))


def test_interpolation_between_vertices():
    g = build_graph(Fraction(3, 7))
    # on [7/3, 14/3] L1 = rising branch of (1,0): ratio (3/7)^2 * r
    q = LogCoord(Fraction(3))
    assert g.L1(q) == LogCoord(Fraction(9, 49) * 3)


@given(st.lists(st.tuples(st.integers(1, 60), st.integers(0, 60)), min_size=1, max_size=8),
       st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=50))
def test_ordered_envelope_is_pointwise_min(raw, xi):
    # build a chain ordered by increasing Q and non-increasing error
    pts = sorted({(Q, round(Q * xi) if P % 2 else (Q * xi).__floor__()) for Q, P in raw})
    trajs, last = [], None
    for Q, P in pts:
        t = Trajectory.of(Q, P, xi)
        if last is None or t.delta <= last.delta:
            trajs.append(t)
            last = t
    lo, hi = ZERO, LogCoord(Fraction(10**4))
    pieces = ordered_envelope(trajs, lo, hi)
    for a, b, owner in pieces:
        assert a < b
        for q in (a, b, LogCoord((a.ratio + b.ratio) / 2)):
            assert evaluate(owner, q) == min(evaluate(t, q) for t in trajs)


def test_segment_slope():
    g = build_graph(Fraction(1, 2))
    v = g.L1.vertices
    assert segment_slope(v[0], v[1]) == -1
    assert segment_slope(v[1], v[2]) == 1


def test_to_json_shape():
    data = build_graph(Fraction(3, 7)).to_json()
    assert data["xi"] == "3/7" and data["s"] == 3 and data["counts"] == [2, 3]
    assert data["q_maxima"][1]["num"] == "14" and data["q_maxima"][1]["den"] == "3"
