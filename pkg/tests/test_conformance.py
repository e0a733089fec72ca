import random
from fractions import Fraction as Q
from itertools import product

import pytest

import oracles as O
from hyperclean.conformance import (ConformanceSpec, PrefixConformance, generic_conf, hybrid_conf,
                                    pref_conf, pref_wit, skor_conf, skor_min_eps, trace_conf,
                                    wit_conf)
from hyperclean.cycles import case_study_retiming, gen_cycle
from hyperclean.retiming import (INF, Arbitrary, Explicit, Identity, MonotoneBijection, Retiming,
                                 RetimingError, Shift, compose_families, family_member, within_tau)
from hyperclean.traces import ABS, restrict_segment

A, B = O.gtt(O.SHIFT_A), O.gtt(O.SHIFT_B)
R1, R2 = O.gtt(O.REV_A), O.gtt(O.REV_B)


def test_trace_conf_examples():
    assert trace_conf(0, ABS, A, A).holds
    v = trace_conf(9, ABS, A, B)
    assert not v.holds
    assert v.counterexample["t"] == 1 and v.counterexample["distance"] == 10


def test_trace_conf_sine_nedc():
    assert trace_conf(5, ABS, gen_cycle("NEDC"), gen_cycle("SineNEDC")).holds


def test_hybrid_conf_examples():
    assert hybrid_conf(1, 0, ABS, A, B).holds
    v = hybrid_conf(Q(1, 2), 0, ABS, A, B)
    assert not v.holds and v.counterexample["t"] == 1 and v.counterexample["trace"] == 1
    assert hybrid_conf(2, 0, ABS, R1, R2).holds


def test_skor_conf_examples():
    assert skor_conf(0, 0, ABS, A, A).holds
    assert skor_conf(1, 0, ABS, A, B).holds
    v = skor_conf(2, 5, ABS, R1, R2)
    assert not v.holds and v.counterexample["min_eps"] == 10
    assert skor_min_eps(2, ABS, R1, R2) == 10


def test_skor_witness_is_monotone():
    w = skor_conf(1, 0, ABS, A, B).witness
    assert family_member(w, MonotoneBijection(), 1) or all(
        a[1] <= b[1] for a, b in zip(w.r1, w.r1[1:]))


def test_checkers_against_brute_force():
    rng = random.Random(7)
    for _ in range(150):
        a, b = O.random_pair(rng, 8)
        for tau, eps in product((0, 1, 2), (0, 1, 5)):
            assert trace_conf(eps, ABS, a, b).holds == O.trace_conf(eps, a, b)
            assert hybrid_conf(tau, eps, ABS, a, b).holds == O.hybrid_conf(tau, eps, a, b)
            assert skor_conf(tau, eps, ABS, a, b).holds == O.skor_conf(tau, eps, a, b)


def test_symmetry_and_threshold_monotonicity():
    rng = random.Random(11)
    for _ in range(80):
        a, b = O.random_pair(rng, 10)
        for tau, eps in product((0, 1, 2), (0, 1, 5)):
            for f in (lambda t, e, x, y: hybrid_conf(t, e, ABS, x, y).holds,
                      lambda t, e, x, y: skor_conf(t, e, ABS, x, y).holds):
                assert f(tau, eps, a, b) == f(tau, eps, b, a)
                if f(tau, eps, a, b):
                    assert f(tau + 1, eps, a, b) and f(tau, eps + 1, a, b)


def test_tau_zero_collapse():
    rng = random.Random(3)
    for _ in range(100):
        a, b = O.random_pair(rng, 10, same_domain_p=1.0)
        for eps in (0, 1, 5):
            t = trace_conf(eps, ABS, a, b).holds
            assert hybrid_conf(0, eps, ABS, a, b).holds == t
            assert skor_conf(0, eps, ABS, a, b).holds == t


def test_generic_dispatch_matches_dedicated():
    rng = random.Random(5)
    for _ in range(100):
        a, b = O.random_pair(rng, 8)
        tau, eps = rng.choice([0, 1, 2]), rng.choice([0, 1, 5])
        assert generic_conf(ConformanceSpec(Identity(), 0, eps), a, b).holds == \
            trace_conf(eps, ABS, a, b).holds
        assert generic_conf(ConformanceSpec(Arbitrary(), tau, eps), a, b).holds == \
            hybrid_conf(tau, eps, ABS, a, b).holds
        assert generic_conf(ConformanceSpec(MonotoneBijection(), tau, eps), a, b).holds == \
            skor_conf(tau, eps, ABS, a, b).holds


def test_shift_family():
    spec = ConformanceSpec(Shift(Q(1)), INF, 0)
    a = O.gtt([0, 10, 0], [0, 1, 2])
    b = O.gtt([0, 10, 0], [1, 2, 3])
    assert generic_conf(spec, a, b).holds
    assert not generic_conf(ConformanceSpec(Shift(Q(1)), Q(1, 2), 0), a, b).holds


def test_explicit_r_d_on_nominal_cycles():
    spec = ConformanceSpec(Explicit((case_study_retiming("r_d"),), "r_d"), INF, 15)
    v = generic_conf(spec, gen_cycle("NEDC"), gen_cycle("DoubleNEDC"))
    assert v.holds
    assert generic_conf(spec.with_eps(0), gen_cycle("NEDC"), gen_cycle("DoubleNEDC")).holds


def test_explicit_domain_mismatch_errors():
    r = Retiming.identity([0, 1])
    with pytest.raises(RetimingError):
        generic_conf(ConformanceSpec(Explicit((r,)), INF, 0), O.gtt([0, 0, 0]), O.gtt([0, 0, 0]))


def test_wit_conf_examples():
    w = wit_conf(ConformanceSpec(Identity(), 0, 0), A, A)
    assert all(x == y for x, y in w.r1 + w.r2)
    w = wit_conf(ConformanceSpec(Arbitrary(), 1, 0), A, B)
    assert w.map1[1] == 2 and w.map2[2] == 1
    assert wit_conf(ConformanceSpec(Arbitrary(), Q(1, 2), 0), A, B) is None


def test_within_tau_and_membership():
    ident = Retiming.identity([0, 1, 2])
    assert within_tau(ident, 0)
    sh = Retiming.from_functions([0, 1, 2], lambda t: t + 2, [2, 3, 4], lambda t: t - 2)
    assert not within_tau(sh, 1)
    assert within_tau(sh, INF)
    assert family_member(ident, Identity())
    assert not family_member(Retiming.of({0: 2, 1: 1}, {1: 1, 2: 0}), MonotoneBijection())
    rd = case_study_retiming("r_d")
    assert family_member(rd, Explicit((rd,)))
    assert rd.map2[Q(1181)] == 1 and rd.map2[Q(590)] == 590


def test_compose_families():
    rng = random.Random(2)
    c = compose_families(Identity(), 0, Identity(), 0)
    for _ in range(30):
        a, b = O.random_pair(rng, 6, same_domain_p=1.0)
        e = rng.choice([0, 1, 5])
        assert generic_conf(ConformanceSpec(c, INF, e), a, b).holds == O.trace_conf(e, a, b)


def test_hybrid_perm_composition_on_nominal_cycles():
    rp = case_study_retiming("r_p")
    fam = compose_families(Arbitrary(), 2, Explicit((rp,), "r_p"), INF)
    assert generic_conf(ConformanceSpec(fam, INF, 0), gen_cycle("NEDC"),
                        gen_cycle("PermNEDC")).holds


# ---------------------------------------------------------------------------
# PrefConf


def brute_pref(check, tau, a, b, t):
    """Enumerate endpoint tuples over domain points in the windows."""
    def win(g, lo, hi):
        return [x for x in g.times if lo <= x <= hi]
    for s1, e1, s2, e2 in product(win(a, 0, tau), win(a, t - tau, t + tau),
                                  win(b, 0, tau), win(b, t - tau, t + tau)):
        if s1 <= e1 and s2 <= e2 and check(restrict_segment(a, s1, e1),
                                           restrict_segment(b, s2, e2)):
            return True
    return False


@pytest.mark.parametrize("family,oracle", [
    (Arbitrary(), lambda tau, eps: lambda x, y: O.hybrid_conf(tau, eps, x, y)),
    (MonotoneBijection(), lambda tau, eps: lambda x, y: O.skor_conf(tau, eps, x, y)),
    (Identity(), lambda tau, eps: lambda x, y: O.trace_conf(eps, x, y)),
])
def test_prefix_conformance_against_enumeration(family, oracle):
    rng = random.Random(13)
    for _ in range(60):
        a, b = O.random_pair(rng, 6)
        tau, eps = rng.choice([0, 1, 2]), rng.choice([0, 1, 5])
        p = PrefixConformance(ConformanceSpec(family, tau, eps), a, b)
        for t in sorted(set(a.times) | set(b.times)):
            assert p.holds(t) == brute_pref(oracle(tau, eps), tau, a, b, t), (a, b, tau, eps, t)


def test_pref_examples():
    spec = ConformanceSpec(Arbitrary(), 1, 0)
    assert pref_conf(spec, A, B, 3).holds
    ep, w = pref_wit(spec, A, B, 3)
    s1, e1, s2, e2 = ep
    assert generic_conf(spec, restrict_segment(A, s1, e1), restrict_segment(B, s2, e2)).holds
    ep, _ = pref_wit(ConformanceSpec(Identity(), 0, 0), A, A, 3)
    assert ep == (0, 3, 0, 3)
    zero, hundred = O.gtt([0] * 4), O.gtt([100] * 4)
    assert not pref_conf(ConformanceSpec(Arbitrary(), 1, 1), zero, hundred, 3).holds
    assert pref_wit(ConformanceSpec(Arbitrary(), 1, 1), zero, hundred, 3) is None


def test_unbounded_pref_is_full_conformance():
    rng = random.Random(17)
    for _ in range(40):
        a, b = O.random_pair(rng, 6)
        spec = ConformanceSpec(Arbitrary(), INF, rng.choice([0, 1, 5]))
        full = generic_conf(spec, a, b).holds
        assert all(pref_conf(spec, a, b, t).holds == full for t in (0, 3, 10))
