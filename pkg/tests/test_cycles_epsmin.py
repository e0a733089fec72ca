import math
import random
from fractions import Fraction as Q

import pytest

import oracles as O
from hyperclean.cleanness import Contract
from hyperclean.cycles import (CATALOG, case_study_retiming, contract_catalog, gen_cycle, resolve,
                               sync_d)
from hyperclean.epsmin import (CoverageError, epsilon_min, epsilon_min_retimed, global_min,
                               local_min, tau_sweep)
from hyperclean.retiming import Arbitrary, Explicit, Identity, Retiming, retime
from hyperclean.traces import ABS, sample

A, B = O.gtt(O.SHIFT_A), O.gtt(O.SHIFT_B)


def test_nedc_shape():
    n = gen_cycle("NEDC")
    assert n.length == 1180 and len(n) == 1181
    assert max(v[0] for v in n.values) == 120
    assert sample(n, 0) == (0,) and sample(n, 1180) == (0,) and sample(n, 1126) == (120,)


def test_double_and_perm():
    n, d, p = gen_cycle("NEDC"), gen_cycle("DoubleNEDC"), gen_cycle("PermNEDC")
    assert d.length == 2360
    assert all(sample(d, t + 1180) == sample(n, t) for t in n.times)
    assert all(sample(d, t) == sample(n, t) for t in n.times)
    # a permutation of segments keeps the speed multiset up to boundary samples
    diff = sorted(v[0] for v in n.values)
    got = sorted(v[0] for v in p.values)
    assert sum(1 for x, y in zip(diff, got) if x != y) <= 10


def test_sine_nedc():
    n, s = gen_cycle("NEDC"), gen_cycle("SineNEDC")
    assert sample(s, 0) == (0,)
    for t, a, b in zip(n.times, n.values, s.values):
        exact = max(0.0, float(a[0]) + 5 * math.sin(0.5 * float(t)))
        assert abs(float(b[0]) - exact) < 1e-6
        assert abs(b[0] - a[0]) <= 5


def test_r_p_maps_nedc_onto_perm():
    rp = case_study_retiming("r_p")
    n, p = gen_cycle("NEDC"), gen_cycle("PermNEDC")
    moved = retime(n, rp.apply2, p.times)
    assert moved.values == p.values


def test_catalog():
    c = contract_catalog("C")
    assert isinstance(c.input_conf.family, Identity) and c.input_conf.epsilon == 15
    assert isinstance(c.output_conf.family, Identity) and c.output_conf.epsilon == 180
    cd = contract_catalog("C_d")
    assert cd.sync is not None and cd.sync.pair == sync_d()
    assert isinstance(cd.input_conf.family, Explicit)
    c2 = contract_catalog("C(tau,eps)", (2, 15))
    assert isinstance(c2.input_conf.family, Arbitrary)
    assert (c2.input_conf.tau, c2.input_conf.epsilon) == (2, 15)
    for name in CATALOG:
        c = contract_catalog(name, (2, 15) if "(" in name else None)
        assert Contract.from_json(c.to_json(), resolve) == c


def test_local_and_global_min():
    assert local_min(1, A, B, 1) == 0
    assert local_min(1, A, B, Q(1, 2)) == 10
    assert all(local_min(t, A, A, 0) == 0 for t in A.times)
    assert global_min(A, A, 0) == 0
    assert global_min(A, B, 1) == 0
    assert global_min(A, B, 0) == 10


def test_epsilon_min_examples():
    assert epsilon_min(A, B, 1) == 0
    n = gen_cycle("NEDC")
    assert Q(49, 10) < epsilon_min(n, gen_cycle("SineNEDC"), 0) <= 5
    assert epsilon_min_retimed(n, gen_cycle("DoubleNEDC"), case_study_retiming("r_d"), 0) == 0
    assert epsilon_min_retimed(n, gen_cycle("PermNEDC"), case_study_retiming("r_p"), 0) == 0
    ident = Retiming.identity(A.times, B.times)
    assert epsilon_min_retimed(A, B, ident, 1) == epsilon_min(A, B, 1)


def test_epsilon_min_equals_brute_force():
    rng = random.Random(23)
    for _ in range(100):
        a, b = O.random_pair(rng, 10)
        for tau in (0, 1, 2):
            cands = O.distance_set(a, b)
            best = min(e for e in cands if O.hybrid_conf(tau, e, a, b)) \
                if any(O.hybrid_conf(tau, e, a, b) for e in cands) else None
            try:
                got = epsilon_min(a, b, tau)
            except CoverageError:
                got = None
            assert got == best


def test_tau_sweep():
    assert [e for _, e in tau_sweep(A, A).entries] == [0] * 8
    assert [e for _, e in tau_sweep(A, B, [0, Q(1, 2), 1]).entries] == [10, 10, 0]
    assert tau_sweep(A, B, [0, 1]).to_csv() == "tau,eps_min\n0,10\n1,0\n"


def test_coverage_error_names_time():
    a = O.gtt([1, 1], [0, 1])
    b = O.gtt([1, 1], [0, 5])
    with pytest.raises(CoverageError) as e:
        epsilon_min(a, b, 0)
    assert "t=" in str(e.value)
