import io
from fractions import Fraction as Q

import pytest

from hyperclean.traces import (ABS, DISCRETE, PIECEWISE_CONSTANT, PIECEWISE_LINEAR, Gtt, Metric,
                               SystemTrace, TraceError, metric_eval, read_csv, restrict_prefix,
                               restrict_segment, sample, with_clock, write_csv)


def g(times, vals, interp=DISCRETE):
    return Gtt.build(times, [(v,) for v in vals], ("x",), interp)


@pytest.mark.parametrize("t0,dom", [(Q(3, 2), [0, 1]), (5, [0, 1, 2, 3]), (0, [0])])
def test_restrict_prefix(t0, dom):
    assert list(restrict_prefix(g([0, 1, 2, 3], [0, 1, 2, 3]), t0).times) == dom


def test_restrict_segment():
    mu = g(range(5), range(5))
    assert list(restrict_segment(mu, 1, 3).times) == [1, 2, 3]
    assert list(restrict_segment(mu, 2, 2).times) == [2]
    assert restrict_segment(g([0, 1, 2], [0, 0, 0]), Q(1, 2), Q(7, 10)).empty


def test_restrict_segment_linear_inserts_endpoints():
    seg = restrict_segment(g([0, 2], [0, 10], PIECEWISE_LINEAR), Q(1, 2), 1)
    assert list(seg.times) == [Q(1, 2), 1]
    assert [v[0] for v in seg.values] == [Q(5, 2), 5]


def test_sample_modes():
    assert sample(g([0, 2], [0, 10], PIECEWISE_LINEAR), 1) == (5,)
    assert sample(g([0, 1], [0, 1]), Q(1, 2)) is None
    assert sample(g([0, 2], [3, 7], PIECEWISE_CONSTANT), Q(19, 10)) == (3,)
    assert sample(g([0, 2], [3, 7], PIECEWISE_CONSTANT), 3) is None


def test_metric_eval():
    assert metric_eval(ABS, (32,), (17,)) == 15
    assert metric_eval(ABS, (182,), (392,)) == 210
    w = Metric("l1", weights=(Q(1), Q(2)))
    assert metric_eval(w, (1, 1), (0, 3)) == 5
    e = Metric("expr", expr="abs(x - x')")
    for a in [(0,), (3,), (-2,)]:
        assert metric_eval(e, a, a) == 0
        assert metric_eval(e, a, (1,)) == metric_eval(e, (1,), a)


def test_gtt_invariants():
    with pytest.raises(TraceError):
        g([0, 0], [1, 2])
    with pytest.raises(TraceError):
        Gtt.build([0, 1], [(1,), (1, 2)])
    assert g([0, 1, 4], [0, 0, 0]).length == 4


def test_system_trace_domains_must_match():
    with pytest.raises(TraceError):
        SystemTrace("s", g([0, 1], [0, 0]), g([0, 2], [0, 0]))


def test_with_clock():
    c = with_clock(g([0, 1, 2], [5, 5, 5]))
    assert [v[1] for v in c.values] == [0, 1, 2]
    with pytest.raises(TraceError):
        with_clock(c)


def test_csv_round_trip_exact():
    mu = g([0, Q(1, 3), 2], [Q(1, 7), -2, Q(5, 2)], PIECEWISE_LINEAR)
    buf = io.StringIO()
    write_csv(mu, buf)
    back = read_csv(io.StringIO(buf.getvalue()), PIECEWISE_LINEAR)
    assert back.times == mu.times and back.values == mu.values


def test_csv_column_mapping():
    text = "time,rpm,speed\n0,900,0\n1,1500,12.5\n"
    mu = read_csv(io.StringIO(text), DISCRETE, columns=["speed"], time_column="time")
    assert mu.names == ("speed",)
    assert [v[0] for v in mu.values] == [0, Q(25, 2)]
