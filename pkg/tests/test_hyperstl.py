import random
import time
from fractions import Fraction as Q

import pytest

import oracles as O
from hyperclean.cleanness import clean_det, hybrid_clean, robust_clean
from hyperclean.conformance import CapabilityError, hybrid_conf, trace_conf
from hyperclean.hyperstl import (Abs, And, Atom, BinOp, Exists, Forall, FormulaSyntaxError,
                                 Freeze, Implies, Neg, Not, Num, Or, Since, TrueF, Truth, Until,
                                 Var, parse_formula, print_formula, satisfies, value)
from hyperclean.hyperstl.ast import children, desugar
from hyperclean.hyperstl.builders import (GENERAL, hybrid_clean_formula, hybrid_conf_formula,
                                          robust_clean_formula, trace_conf_formula)
from hyperclean.hyperstl.satset import sat_set
from hyperclean.traces import ABS, PIECEWISE_CONSTANT, PIECEWISE_LINEAR, Gtt, SystemTrace, TraceSet

T, F_, U = Truth.T, Truth.F, Truth.U

MU = {"mu1": O.gtt([0, 0, 0], [0, 2, 4]), "mu2": O.gtt([1, 1, 0], [0, 1, 3])}


# ---------------------------------------------------------------------------
# parser


def test_parse_phi1_structure():
    f = parse_formula("forall p1. forall p2. G[0,4] (x[p1] == x[p2])")
    assert isinstance(f, Forall) and isinstance(f.body, Forall)
    g = f.body.body
    assert isinstance(g, Not) and isinstance(g.arg, Until) and g.arg.interval == (0, 4)


@pytest.mark.parametrize("text", [
    "forall p1. F[0,3] *1 F[0,1] (x*1[p1] == x[p2])",
    "forall p. forall p. x[p] > 0",
    "forall p. x[p] >",
    "forall p. G[0,4 (x[p] == 0)",
    "forall p. x[p] @ 1",
])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula(text)
    assert "line 1" in str(e.value)


def test_register_limit():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("forall p. *3 (x*3[p] == 0)", max_register=2)


def _rand_expr(rng, traces, regs, d=2, names=("x", "y")):
    k = rng.randint(0, 5 if d else 1)
    if k == 0:
        return Num(Q(rng.randint(0, 9), rng.choice([1, 2, 3])))
    if k == 1:
        return Var(rng.choice(names), rng.choice(traces), rng.choice([None, *regs]))
    if k == 2:
        return Neg(_rand_expr(rng, traces, regs, d - 1, names))
    if k == 3:
        return Abs(_rand_expr(rng, traces, regs, d - 1, names))
    return BinOp(rng.choice("+-*/"), _rand_expr(rng, traces, regs, d - 1, names),
                 _rand_expr(rng, traces, regs, d - 1, names))


def _rand_formula(rng, traces, regs, d=3, names=("x", "y")):
    k = rng.randint(0, 8 if d else 1)
    if k <= 1:
        return Atom(_rand_expr(rng, traces, regs, 2, names), rng.choice(["<=", "<", ">=", ">", "==", "!="]),
                    _rand_expr(rng, traces, regs, 2, names))
    if k == 2:
        return TrueF()
    if k == 3:
        return Not(_rand_formula(rng, traces, regs, d - 1, names))
    if k == 4:
        return rng.choice([Or, And, Implies])(_rand_formula(rng, traces, regs, d - 1, names),
                                              _rand_formula(rng, traces, regs, d - 1, names))
    if k in (5, 6):
        a = Q(rng.randint(0, 3))
        b = rng.choice([None, a + rng.randint(1, 3)])
        return rng.choice([Until, Since])(_rand_formula(rng, traces, regs, d - 1, names),
                                          _rand_formula(rng, traces, regs, d - 1, names), (a, b))
    if k == 7:
        r = rng.randint(1, 3)
        return Freeze(r, _rand_formula(rng, traces, sorted({*regs, r}), d - 1, names))
    v = f"p{rng.randrange(2, 10**6)}"
    while v in traces:
        v = f"p{rng.randrange(2, 10**6)}"
    return rng.choice([Forall, Exists])(v, _rand_formula(rng, [*traces, v], regs, d - 1, names))


def test_round_trip_random_asts():
    rng = random.Random(42)
    for _ in range(100):
        f = Forall("p1", _rand_formula(rng, ["p1"], []))
        text = print_formula(f)
        assert parse_formula(text, closed=False) == f, text


# ---------------------------------------------------------------------------
# evaluation


@pytest.mark.parametrize("text,expected", [
    ("forall p1. forall p2. G[0,4] (x[p1] == x[p2])", False),
    ("forall p1. forall p2. G[1,4] (x[p1] == x[p2])", True),
    ("forall p1. forall p2. F[0,4] (x[p1] == x[p2])", False),
    ("forall p1. forall p2. F[0,3] *1 F[0,1] (x*1[p1] == x[p2])", True),
])
def test_worked_example(text, expected):
    assert satisfies(MU, parse_formula(text)) is expected


def test_closed_formulas_are_two_valued():
    rng = random.Random(8)
    for _ in range(60):
        f = Forall("p1", _rand_formula(rng, ["p1"], [], 2, ("x",)))
        try:
            v = value(f, MU)
        except (ZeroDivisionError, CapabilityError):
            continue
        assert v in (T, F_)


def test_true_and_trivial():
    assert value(TrueF(), MU, {}, {}, 3) is T
    assert satisfies({"only": O.gtt([5])}, parse_formula("forall p. true"))


def test_or_truth_table():
    atoms = {T: TrueF(), F_: Not(TrueF()), U: parse_formula("x[p] == 0", closed=False)}
    # x[p] is undefined at t=1 on mu1
    env = ({"p": "mu1"}, {}, Q(1))
    table = {(a, b): value(Or(fa, fb), MU, *env) for a, fa in atoms.items()
             for b, fb in atoms.items()}
    assert table[T, U] is T and table[U, T] is T
    assert table[F_, U] is U and table[U, U] is U
    assert table[F_, F_] is F_


def test_negation_normal_form_agrees():
    rng = random.Random(19)
    for _ in range(60):
        f = Forall("p1", Forall("p2", _rand_formula(rng, ["p1", "p2"], [], 2, ("x",))))
        try:
            v = satisfies(MU, f)
        except (ZeroDivisionError, CapabilityError):
            continue
        assert satisfies(MU, desugar(f)) == v
        assert satisfies(MU, Not(Not(f))) == v


def test_clock_substitution():
    g = {"a": O.gtt([3, 1, 4, 1], [0, 1, 2, 3])}
    for t in range(4):
        for c in range(5):
            lhs = value(parse_formula(f"c[p] + x[p] >= {c}", closed=False), g, {"p": "a"}, {}, t)
            rhs = value(parse_formula(f"{t} + x[p] >= {c}", closed=False), g, {"p": "a"}, {}, t)
            assert lhs is rhs


# ---------------------------------------------------------------------------
# dense-time quantification against a uniform-grid oracle

SLOPES = (0, 1, -1, 2, -2, 4, -4, 5, -5)
BOUNDS = [Q(0), Q(1, 2), Q(1), Q(3, 2), Q(2)]


def _pl_trace(rng, B):
    v = [rng.randint(-3, 3)]
    for _ in range(B):
        v.append(v[-1] + rng.choice(SLOPES))
    return Gtt.build(range(B + 1), [(x,) for x in v], ("x",), PIECEWISE_LINEAR)


def _dense_formula(rng, d):
    k = rng.randint(0, 5 if d else 0)
    if k == 0:
        return Atom(Var("x", rng.choice(["p1", "p2"])), rng.choice(["<=", "<", ">=", ">", "=="]),
                    Num(Q(rng.randint(-4, 4))))
    if k == 1:
        return Not(_dense_formula(rng, d - 1))
    if k == 2:
        return rng.choice([And, Or])(_dense_formula(rng, d - 1), _dense_formula(rng, d - 1))
    a = rng.choice(BOUNDS[:-1])
    b = rng.choice([x for x in BOUNDS if x > a])
    return rng.choice([Until, Since])(_dense_formula(rng, d - 1), _dense_formula(rng, d - 1), (a, b))


def _horizon(f):
    own = f.interval[1] if isinstance(f, Until) else 0
    return own + max([_horizon(c) for c in children(f)], default=0)


def test_dense_quantification_matches_oversampling():
    """Crossing instants of slopes 1, 2, 4 and 5 all sit on a 1/20 lattice, so a
    0.01 s grid sees every change and the oracle is exact."""
    rng = random.Random(31)
    n = 0
    while n < 100:
        B = rng.randint(2, 4)
        kap = {"p1": _pl_trace(rng, B), "p2": _pl_trace(rng, B)}
        f = _dense_formula(rng, 3)
        h = _horizon(f)
        if h > B:
            continue
        n += 1
        ts = [Q(rng.randint(0, int((B - h) * 20)), 20) for _ in range(5)]
        for t, o in zip(ts, O.dense_values(f, kap, ts)):
            assert (value(f, kap, {"p1": "p1", "p2": "p2"}, {}, t) is T) == o, (f, t)


# ---------------------------------------------------------------------------
# formula builders

A, B = O.gtt(O.SHIFT_A), O.gtt(O.SHIFT_B)


def _pair_value(f, a, b):
    return value(f, {"a": a, "b": b}, {"p1": "a", "p2": "b"}) is T


def test_builder_examples():
    assert _pair_value(hybrid_conf_formula(0, 0), A, A)
    assert _pair_value(hybrid_conf_formula(1, 0), A, B)
    assert not _pair_value(hybrid_conf_formula(Q(1, 2), 0), A, B)
    assert _pair_value(trace_conf_formula(0), A, A)
    short = O.gtt([0, 10], [0, 1])
    assert not _pair_value(trace_conf_formula(100), O.gtt([0, 10, 0]), short)


def test_conf_formulas_match_checkers():
    rng = random.Random(12)
    for _ in range(60):
        a, b = O.random_pair(rng, 6)
        a = a.with_values((0, *a.times[1:]), a.values)
        b = b.with_values((0, *b.times[1:]), b.values)
        tau, eps = rng.choice([0, 1, 2]), rng.choice([0, 1, 5])
        assert _pair_value(hybrid_conf_formula(tau, eps), a, b) == \
            hybrid_conf(tau, eps, ABS, a, b).holds
        assert _pair_value(trace_conf_formula(eps), a, b) == trace_conf(eps, ABS, a, b).holds


def _overshoot():
    def s(tid, i, o):
        return SystemTrace(tid, O.gtt(i), O.gtt(o, names=("y",)))
    return TraceSet((s("st", (0, 10, 10, 0, 0, 0), (0, 1, 1, 0, 0, 0)),
                     s("ddev", (0, 0, 10, 10, 0, 0), (0, 0, 9, 9, 0, 0))))


def test_clean_formulas_on_overshoot():
    H = _overshoot()
    assert satisfies(H, robust_clean_formula(1, 1)) == clean_det(robust_clean(1, 1), H).passed
    assert satisfies(H, robust_clean_formula(1, 1))
    hc = hybrid_clean_formula(1, 1, 1, 1, variant=GENERAL)
    assert not satisfies(H, hc)
    assert not clean_det(hybrid_clean(1, 1, 1, 1), H).passed


def test_single_trace_is_clean():
    H = TraceSet((SystemTrace("s", O.gtt([1, 2, 0]), O.gtt([3, 0, 1], names=("y",))),))
    assert satisfies(H, hybrid_clean_formula(1, 1, 1, 1, variant=GENERAL))
    assert satisfies(H, robust_clean_formula(0, 0))


def test_general_prefconf_variant_matches_checker():
    """The all-orders variant agrees with clean_det where the literal one cannot."""
    rng = random.Random(0)
    t0 = time.time()
    checked = 0
    while checked < 50:
        H = O.random_system(rng, 2, 8)
        try:
            want = clean_det(hybrid_clean(1, 1, 1, 1), H).passed
        except ValueError:
            continue
        checked += 1
        assert satisfies(H, hybrid_clean_formula(1, 1, 1, 1, variant=GENERAL)) == want
    assert time.time() - t0 < 120


# ---------------------------------------------------------------------------
# satisfaction sets


def _pc(vals):
    return Gtt.build(range(len(vals)), [(v,) for v in vals], ("x",), PIECEWISE_CONSTANT)


def test_sat_top_and_negation():
    kap = {"p1": _pc([0, 1, 2]), "p2": _pc([1, 1, 0])}
    top = sat_set(TrueF(), kap)
    assert top.contains(0) and top.contains(2) and top.contains(Q(7, 5))
    assert not top.contains(Q(5, 2))
    a = parse_formula("x[p1] >= x[p2]", closed=False)
    s, n = sat_set(a, kap), sat_set(Not(a), kap)
    for k in range(0, 41):
        t = Q(k, 20)
        assert s.contains(t) != n.contains(t)


def test_sat_set_capabilities():
    kap = {"p1": _pc([0, 1, 2])}
    with pytest.raises(CapabilityError):
        sat_set(parse_formula("forall p. x[p] > 0"), kap)
    with pytest.raises(CapabilityError):
        sat_set(parse_formula("F (x[p1] > 0)", closed=False), kap)
    with pytest.raises(CapabilityError):
        sat_set(parse_formula("*1 *2 *3 (x*1[p1] > x*2[p1] + x*3[p1])", closed=False), kap)
    with pytest.raises(CapabilityError):
        sat_set(parse_formula("x[p1] > 0", closed=False), {"p1": O.gtt([0, 1])})
