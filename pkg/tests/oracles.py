"""Brute-force reference implementations used as test oracles.

Each one follows the textbook definition as directly as possible and shares
no code with the package beyond the trace container.
"""

from __future__ import annotations

import random
from fractions import Fraction as Q
from functools import lru_cache
from itertools import product

from hyperclean.traces import Gtt, SystemTrace, TraceSet


def gtt(vals, times=None, names=("x",), interp="discrete"):
    times = list(range(len(vals))) if times is None else times
    return Gtt.build(times, [(v,) if not isinstance(v, tuple) else v for v in vals], names, interp)


SHIFT_A = (0, 10, 0, 0)
SHIFT_B = (0, 0, 10, 0)
REV_A = (0, 10, 0, 20, 0, 0)
REV_B = (0, 20, 0, 10, 0, 0)


# ---------------------------------------------------------------------------
# random data


def random_pair(rng: random.Random, max_len=20, same_domain_p=0.5):
    n = rng.randint(1, max_len)
    t1 = sorted(rng.sample(range(0, 2 * max_len), n))
    if rng.random() < same_domain_p:
        t2 = list(t1)
    else:
        t2 = sorted(rng.sample(range(0, 2 * max_len), rng.randint(1, max_len)))
    v1 = [rng.randint(0, 20) for _ in t1]
    if t2 == t1 and rng.random() < 0.6:
        v2 = [min(20, max(0, v + rng.randint(-2, 2))) for v in v1]
    else:
        v2 = [rng.randint(0, 20) for _ in t2]
    return gtt(v1, t1), gtt(v2, t2)


def random_system(rng: random.Random, k: int, max_len=8, values=3, horizon=12):
    """``k`` discrete system traces starting at 0 with small integer values."""
    out = []
    for j in range(k):
        n = rng.randint(1, max_len)
        dom = sorted({0, *rng.sample(range(1, horizon), n - 1)})
        out.append(SystemTrace(f"s{j}", gtt([rng.randint(0, values) for _ in dom], dom),
                               gtt([rng.randint(0, values) for _ in dom], dom, ("y",))))
    return TraceSet(tuple(out))


# ---------------------------------------------------------------------------
# conformance


def _vals(g):
    return {t: v[0] for t, v in zip(g.times, g.values)}


def trace_conf(eps, a, b) -> bool:
    va, vb = _vals(a), _vals(b)
    return va.keys() == vb.keys() and all(abs(va[t] - vb[t]) <= eps for t in va)


def hybrid_conf(tau, eps, a, b) -> bool:
    va, vb = _vals(a), _vals(b)

    def side(x, y):
        return all(any(abs(t - s) <= tau and abs(v - w) <= eps for s, w in y.items())
                   for t, v in x.items())
    return side(va, vb) and side(vb, va)


def skor_conf(tau, eps, a, b) -> bool:
    """Exhaustive search over monotone matchings (staircase paths)."""
    ta, tb = list(a.times), list(b.times)
    va, vb = _vals(a), _vals(b)

    def ok(i, j):
        return abs(ta[i] - tb[j]) <= tau and abs(va[ta[i]] - vb[tb[j]]) <= eps

    @lru_cache(None)
    def reach(i, j):
        if not ok(i, j):
            return False
        if i == 0 and j == 0:
            return True
        return ((i > 0 and reach(i - 1, j)) or (j > 0 and reach(i, j - 1))
                or (i > 0 and j > 0 and reach(i - 1, j - 1)))
    return reach(len(ta) - 1, len(tb) - 1)


def distance_set(a, b):
    return sorted({abs(x[0] - y[0]) for x in a.values for y in b.values})


# ---------------------------------------------------------------------------
# dense evaluation of quantifier-free, freeze-free formulas


def dense_values(phi, kappa, ts, step=Q(1, 100)):
    """Truth of ``phi`` at each of ``ts`` by evaluating every node on a uniform grid.

    Only sound when every breakpoint of every node lies on the grid, which
    the generators in the tests guarantee.
    """
    from hyperclean.hyperstl.ast import And, Atom, Not, Num, Or, Since, TrueF, Until, Var
    from hyperclean.traces import sample
    B = min(g.times[-1] for g in kappa.values())
    n = int(B / step)
    grid = [k * step for k in range(n + 1)]
    memo = {}

    def term(e, x):
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Var):
            return sample(kappa[e.trace], x)[0]
        raise TypeError(e)

    def steps(x):
        k = x / step
        assert k.denominator == 1, "interval bound off the grid"
        return int(k)

    def scan(a, b, lo, hi, direction):
        r = []
        for i in range(len(grid)):
            res = False
            for d in range(0, hi + 1):
                j = i + direction * d
                if not 0 <= j < len(grid):
                    break
                if d >= lo and b[j]:
                    res = True
                    break
                if not a[j]:
                    break
            r.append(res)
        return r

    def arr(f):
        if id(f) in memo:
            return memo[id(f)]
        if isinstance(f, TrueF):
            r = [True] * len(grid)
        elif isinstance(f, Atom):
            op = {"<=": lambda p, q: p <= q, "<": lambda p, q: p < q,
                  ">=": lambda p, q: p >= q, ">": lambda p, q: p > q,
                  "==": lambda p, q: p == q}[f.op]
            r = [op(term(f.left, x), term(f.right, x)) for x in grid]
        elif isinstance(f, Not):
            r = [not v for v in arr(f.arg)]
        elif isinstance(f, (And, Or)):
            a, b = arr(f.left), arr(f.right)
            r = [(p and q) if isinstance(f, And) else (p or q) for p, q in zip(a, b)]
        elif isinstance(f, (Until, Since)):
            lo, hi = f.interval
            r = scan(arr(f.left), arr(f.right), steps(lo), steps(hi),
                     1 if isinstance(f, Until) else -1)
        else:
            raise TypeError(type(f).__name__)
        memo[id(f)] = r
        return r
    top = arr(phi)
    return [top[steps(t)] for t in ts]


def all_tuples(ids, n):
    return list(product(ids, repeat=n))
