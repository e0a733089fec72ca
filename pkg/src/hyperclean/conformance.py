"""Trace, hybrid, Skorokhod and retiming-induced conformance, plus PrefConf."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

from .retiming import (Arbitrary, Composition, Explicit, Family, Identity,
                       MonotoneBijection, Retiming, RetimingError, Shift, within_tau)
from .traces import (ABS, PIECEWISE_LINEAR, Gtt, Metric, metric_eval, q,
                     restrict_segment, sample)

HOLDS, VIOLATED, VACUOUS = "holds", "violated", "vacuous"


class CapabilityError(ValueError):
    """The requested combination is outside what this implementation decides."""


@dataclass(frozen=True)
class ConformanceSpec:
    family: Family
    tau: Fraction | None = None
    epsilon: Fraction = Fraction(0)
    metric: Metric = ABS

    def __post_init__(self):
        object.__setattr__(self, "epsilon", q(self.epsilon))
        if self.tau is not None:
            object.__setattr__(self, "tau", q(self.tau))
            if self.tau < 0:
                raise ValueError("tau must be non-negative")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")

    def with_eps(self, eps) -> "ConformanceSpec":
        return replace(self, epsilon=q(eps))

    def with_tau(self, tau) -> "ConformanceSpec":
        return replace(self, tau=None if tau is None else q(tau))


@dataclass(frozen=True)
class Verdict:
    outcome: str
    witness: Retiming | None = None
    counterexample: dict | None = None
    endpoints: tuple | None = None

    def __bool__(self) -> bool:
        return self.outcome != VIOLATED

    @property
    def holds(self) -> bool:
        return bool(self)


def _violated(side: int, t, distance=None, reason: str = "distance") -> Verdict:
    return Verdict(VIOLATED, counterexample={"trace": side, "t": t, "distance": distance,
                                             "reason": reason})


def _dist(d: Metric, a, b, names=None) -> Fraction:
    return metric_eval(d, a, b, names)


def _empty_pair(mu1: Gtt, mu2: Gtt) -> Verdict | None:
    if mu1.empty and mu2.empty:
        return Verdict(VACUOUS, witness=Retiming((), ()))
    if mu1.empty:
        return _violated(2, mu2.times[0], reason="unmatched")
    if mu2.empty:
        return _violated(1, mu1.times[0], reason="unmatched")
    return None


# ---------------------------------------------------------------------------
# window minimum over the second trace


def _linear_candidates(d: Metric, v, a, b):
    """Parameters in (0,1) where ``d(v, a + s(b-a))`` may have a kink or minimum."""
    out = set()
    diffs0 = [ak - vk for ak, vk in zip(a, v)]
    slopes = [bk - ak for ak, bk in zip(a, b)]
    for x0, m in zip(diffs0, slopes):
        if m:
            out.add(-x0 / m)
    if d.kind == "abs" and len(v) > 1:
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                for sgn in (1, -1):
                    m = slopes[i] - sgn * slopes[j]
                    if m:
                        out.add(-(diffs0[i] - sgn * diffs0[j]) / m)
    return [s for s in out if 0 < s < 1]


def window_min(mu2: Gtt, v, lo, hi, d: Metric = ABS):
    """``(min distance, argmin time)`` of ``v`` against ``mu2`` over ``[lo, hi]``.

    Discrete and piecewise-constant traces are scanned at their sample
    points; piecewise-linear traces include segment interiors.  Returns
    ``None`` when the window meets no part of the domain.
    """
    best = None
    names = mu2.names
    times = mu2.times
    idx = mu2.window(lo, hi)
    for k in idx:
        dk = _dist(d, v, mu2.values[k], names)
        if best is None or dk < best[0]:
            best = (dk, times[k])
    if mu2.interp != PIECEWISE_LINEAR or not times:
        return best
    clo, chi = max(lo, times[0]), min(hi, times[-1])
    if clo > chi:
        return best
    # interior of each linear piece overlapping the window, plus clipped ends
    j0 = max(bisect_right(times, clo) - 1, 0)
    j1 = min(bisect_left(times, chi), len(times) - 1)
    for j in range(j0, j1):
        t0, t1 = times[j], times[j + 1]
        a, b = mu2.values[j], mu2.values[j + 1]
        pts = [s for s in _linear_candidates(d, v, a, b)]
        for tt in (clo, chi):
            if t0 < tt < t1:
                pts.append((tt - t0) / (t1 - t0))
        for s in pts:
            tt = t0 + s * (t1 - t0)
            if not clo <= tt <= chi:
                continue
            val = tuple(x + (y - x) * s for x, y in zip(a, b))
            dk = _dist(d, v, val, names)
            if best is None or dk < best[0] or (dk == best[0] and tt < best[1]):
                best = (dk, tt)
    return best


def _closest_match(mu2: Gtt, v, center, lo, hi, eps, d):
    """Feasible target in ``[lo, hi]`` closest to ``center``, earliest on ties.

    Sample points are scanned outwards from ``center`` so the common case
    stops early; piecewise-linear interiors are only searched when no sample
    point qualifies.
    """
    times, vals, names = mu2.times, mu2.values, mu2.names
    idx = mu2.window(lo, hi)
    a, b = idx.start, idx.stop
    right = max(bisect_left(times, center), a)
    left = right - 1
    while left >= a or right < b:
        if right >= b or (left >= a and center - times[left] <= times[right] - center):
            k, left = left, left - 1
        else:
            k, right = right, right + 1
        if _dist(d, v, vals[k], names) <= eps:
            return times[k]
    if mu2.interp == PIECEWISE_LINEAR:
        m = window_min(mu2, v, lo, hi, d)
        if m is not None and m[0] <= eps:
            return m[1]
    return None


# ---------------------------------------------------------------------------
# the three dedicated checkers


def trace_conf(eps, d: Metric, mu1: Gtt, mu2: Gtt) -> Verdict:
    eps = q(eps)
    if mu1.times != mu2.times:
        only = sorted(set(mu1.times).symmetric_difference(mu2.times))
        t = only[0]
        return _violated(1 if mu1.has_point(t) else 2, t, reason="domain")
    for t, a, b in zip(mu1.times, mu1.values, mu2.values):
        dist = _dist(d, a, b, mu1.names)
        if dist > eps:
            return _violated(1, t, dist)
    if mu1.empty:
        return Verdict(VACUOUS, witness=Retiming((), ()))
    return Verdict(HOLDS, witness=Retiming.identity(mu1.times))


def _directional(mu1: Gtt, mu2: Gtt, tau, eps, d, centers=None, side=1):
    """Every point of ``mu1`` has a partner in ``mu2`` near its centre."""
    out = {}
    end2 = mu2.times[-1] if mu2.times else Fraction(0)
    for t, v in zip(mu1.times, mu1.values):
        c = t if centers is None else centers[t]
        lo, hi = (c - tau, c + tau) if tau is not None else (Fraction(0), end2)
        match = _closest_match(mu2, v, c, lo, hi, eps, d)
        if match is None:
            m = window_min(mu2, v, lo, hi, d)
            return None, _violated(side, t, None if m is None else m[0],
                                   "empty-window" if m is None else "distance")
        out[t] = match
    return out, None


def hybrid_conf(tau, eps, d: Metric, mu1: Gtt, mu2: Gtt) -> Verdict:
    tau = None if tau is None else q(tau)
    eps = q(eps)
    e = _empty_pair(mu1, mu2)
    if e is not None:
        return e
    r1, bad = _directional(mu1, mu2, tau, eps, d, side=1)
    if bad is not None:
        return bad
    r2, bad = _directional(mu2, mu1, tau, eps, d, side=2)
    if bad is not None:
        return bad
    return Verdict(HOLDS, witness=Retiming.of(r1, r2, "hybrid"))


def _skor_grid(mu1: Gtt, mu2: Gtt, tau, d):
    """Band of admissible cells: ``cells[i] = (j_lo, j_hi)`` and a distance getter."""
    n2 = len(mu2)
    band = []
    for t in mu1.times:
        if tau is None:
            band.append((0, n2))
        else:
            band.append((bisect_left(mu2.times, t - tau), bisect_right(mu2.times, t + tau)))
    cache = {}

    def dist(i, j):
        key = (i, j)
        v = cache.get(key)
        if v is None:
            v = cache[key] = _dist(d, mu1.values[i], mu2.values[j], mu1.names)
        return v
    return band, dist


def _skor_dp(mu1: Gtt, mu2: Gtt, tau, eps, d, starts, cost=True):
    """Forward min-cost DP over monotone couplings.

    ``starts`` is a set of admissible first cells.  Returns ``cost`` as a dict
    from reachable cell to ``(path cost, predecessor)``.
    """
    band, dist = _skor_grid(mu1, mu2, tau, d)
    t1, t2 = mu1.times, mu2.times
    best: dict = {}
    for i in range(len(t1)):
        lo, hi = band[i]
        for j in range(lo, hi):
            if dist(i, j) > eps:
                continue
            c = abs(t2[j] - t1[i]) if cost else 0
            cand = None
            if (i, j) in starts:
                cand = (c, None)
            for p in ((i - 1, j - 1), (i - 1, j), (i, j - 1)):
                b = best.get(p)
                if b is not None and (cand is None or b[0] + c < cand[0]):
                    cand = (b[0] + c, p)
            if cand is not None:
                best[(i, j)] = cand
    return best


def _path_to_retiming(mu1: Gtt, mu2: Gtt, best, end) -> Retiming:
    path = []
    cell = end
    while cell is not None:
        path.append(cell)
        cell = best[cell][1]
    path.reverse()
    t1, t2 = mu1.times, mu2.times
    r1: dict = {}
    r2: dict = {}
    for i, j in path:
        a, b = t1[i], t2[j]
        if a not in r1 or (abs(b - a), b) < (abs(r1[a] - a), r1[a]):
            r1[a] = b
        if b not in r2 or (abs(a - b), a) < (abs(r2[b] - b), r2[b]):
            r2[b] = a
    return Retiming.of(r1, r2, "skorokhod")


def skor_conf(tau, eps, d: Metric, mu1: Gtt, mu2: Gtt) -> Verdict:
    tau = None if tau is None else q(tau)
    eps = q(eps)
    e = _empty_pair(mu1, mu2)
    if e is not None:
        return e
    best = _skor_dp(mu1, mu2, tau, eps, d, {(0, 0)})
    end = (len(mu1) - 1, len(mu2) - 1)
    if end not in best:
        m = skor_min_eps(tau, d, mu1, mu2)
        reach = max(best, default=(0, -1))
        return Verdict(VIOLATED, counterexample={
            "trace": 1, "t": mu1.times[min(reach[0] + 1, len(mu1) - 1)] if best else mu1.times[0],
            "distance": m, "reason": "no-monotone-matching", "min_eps": m})
    return Verdict(HOLDS, witness=_path_to_retiming(mu1, mu2, best, end))


def skor_min_eps(tau, d: Metric, mu1: Gtt, mu2: Gtt) -> Fraction | None:
    """Smallest eps admitting a monotone matching (bottleneck DP); ``None`` if none."""
    tau = None if tau is None else q(tau)
    if mu1.empty or mu2.empty:
        return Fraction(0) if mu1.empty and mu2.empty else None
    band, dist = _skor_grid(mu1, mu2, tau, d)
    best: dict = {}
    for i in range(len(mu1)):
        lo, hi = band[i]
        for j in range(lo, hi):
            if (i, j) == (0, 0):
                best[(0, 0)] = dist(0, 0)
                continue
            prev = [best[p] for p in ((i - 1, j - 1), (i - 1, j), (i, j - 1)) if p in best]
            if prev:
                best[(i, j)] = max(dist(i, j), min(prev))
    return best.get((len(mu1) - 1, len(mu2) - 1))


# ---------------------------------------------------------------------------
# generic retiming-induced conformance


def check_retiming(r: Retiming, mu1: Gtt, mu2: Gtt, eps, d: Metric) -> Verdict:
    """Both value clauses of a concrete retiming, evaluated at every domain point."""
    eps = q(eps)
    for side, (src, dst, m) in enumerate(((mu1, mu2, r.map1), (mu2, mu1, r.map2)), start=1):
        for t, v in zip(src.times, src.values):
            if t not in m:
                raise RetimingError(f"retiming undefined at {t} on trace {side}")
            w = sample(dst, m[t])
            if w is None:
                return _violated(side, t, reason="image-outside-domain")
            dist = _dist(d, v, w, src.names)
            if dist > eps:
                return _violated(side, t, dist)
    return Verdict(HOLDS, witness=r)


def _shift_retiming(mu1: Gtt, mu2: Gtt, c: Fraction) -> Retiming:
    return Retiming.of({t: t + c for t in mu1.times}, {t: t - c for t in mu2.times},
                       f"shift({c})")


def _restrict_member(m: Retiming, mu1: Gtt, mu2: Gtt) -> Retiming:
    try:
        return m.restrict(mu1.times, mu2.times)
    except RetimingError as e:
        raise RetimingError(f"explicit retiming domain does not match the traces: {e}") from None


def _inner_members(fam: Family, tau, mu1: Gtt, mu2: Gtt) -> list[Retiming]:
    if isinstance(fam, Explicit):
        ms = [_restrict_member(m, mu1, mu2) for m in fam.members]
    elif isinstance(fam, Identity):
        ms = [Retiming.identity(mu1.times, mu2.times)]
    elif isinstance(fam, Shift):
        ms = [_shift_retiming(mu1, mu2, fam.c)]
    else:
        raise CapabilityError("inner family of a composition must be explicit, identity or shift")
    return [m for m in ms if within_tau(m, tau)]


def _composition_conf(spec: ConformanceSpec, mu1: Gtt, mu2: Gtt) -> Verdict:
    fam: Composition = spec.family
    eps, d = spec.epsilon, spec.metric
    last = None
    for inner in _inner_members(fam.inner, fam.tau_inner, mu1, mu2):
        c1, c2 = inner.map1, inner.map2
        if isinstance(fam.outer, Arbitrary):
            tau_o = fam.tau_outer
        elif isinstance(fam.outer, Identity):
            tau_o = Fraction(0)
        elif isinstance(fam.outer, Shift):
            sh = fam.outer.c
            if fam.tau_outer is not None and abs(sh) > fam.tau_outer:
                continue
            c1 = {t: s + sh for t, s in c1.items()}
            c2 = {t: s - sh for t, s in c2.items()}
            tau_o = Fraction(0)
        else:
            raise CapabilityError("outer family of a composition must be arbitrary, identity or shift")
        r1, bad = _directional(mu1, mu2, tau_o, eps, d, centers=c1, side=1)
        if bad is None:
            r2, bad = _directional(mu2, mu1, tau_o, eps, d, centers=c2, side=2)
        if bad is None:
            return Verdict(HOLDS, witness=Retiming.of(r1, r2, "composition"))
        last = bad
    return last or _violated(1, mu1.start, reason="no-inner-member")


def generic_conf(spec: ConformanceSpec, mu1: Gtt, mu2: Gtt) -> Verdict:
    fam, tau, eps, d = spec.family, spec.tau, spec.epsilon, spec.metric
    if isinstance(fam, Identity):
        return trace_conf(eps, d, mu1, mu2)
    if isinstance(fam, Arbitrary):
        return hybrid_conf(tau, eps, d, mu1, mu2)
    if isinstance(fam, MonotoneBijection):
        return skor_conf(tau, eps, d, mu1, mu2)
    e = _empty_pair(mu1, mu2)
    if e is not None:
        return e
    if isinstance(fam, Shift):
        if tau is not None and abs(fam.c) > tau:
            return _violated(1, mu1.start, reason="shift-exceeds-tau")
        return check_retiming(_shift_retiming(mu1, mu2, fam.c), mu1, mu2, eps, d)
    if isinstance(fam, Explicit):
        last = None
        for m in fam.members:
            m = _restrict_member(m, mu1, mu2)
            if not within_tau(m, tau):
                continue
            v = check_retiming(m, mu1, mu2, eps, d)
            if v:
                return v
            last = v
        return last or _violated(1, mu1.start, reason="no-member-within-tau")
    if isinstance(fam, Composition):
        return _composition_conf(spec, mu1, mu2)
    raise CapabilityError(f"unsupported family {fam!r}")


def wit_conf(spec: ConformanceSpec, mu1: Gtt, mu2: Gtt) -> Retiming | None:
    v = generic_conf(spec, mu1, mu2)
    return v.witness if v else None


# ---------------------------------------------------------------------------
# PrefConf


def _window_points(g: Gtt, lo, hi) -> list[Fraction]:
    pts = [g.times[k] for k in g.window(lo, hi)]
    if g.interp == PIECEWISE_LINEAR and g.times:
        for b in (lo, hi):
            if g.times[0] <= b <= g.times[-1] and b not in pts:
                pts.append(b)
        pts.sort()
    return pts


class PrefixConformance:
    """PrefConf of one trace pair under one spec, answered for many ``t``.

    Endpoint windows follow Def. 4.5 literally: starts in ``[0, tau]``, ends
    in ``[t - tau, t + tau]`` and each side needs start <= end.  The hybrid
    and Skorokhod families get exact fast paths; everything else enumerates
    endpoint tuples.
    """

    def __init__(self, spec: ConformanceSpec, mu1: Gtt, mu2: Gtt):
        self.spec, self.mu1, self.mu2 = spec, mu1, mu2
        self.tau = spec.tau
        pl = PIECEWISE_LINEAR in (mu1.interp, mu2.interp)
        fam = spec.family
        if self.tau is None:
            self.mode = "full"
        elif isinstance(fam, Arbitrary) and not pl:
            self.mode = "hybrid"
        elif isinstance(fam, MonotoneBijection) and not pl:
            self.mode = "skor"
        elif isinstance(fam, Identity) and not pl:
            self.mode = "trace"
        else:
            self.mode = "brute"
        self._memo: dict = {}

    # -- public
    def holds(self, t) -> bool:
        t = q(t)
        r = self._memo.get(t)
        if r is None:
            r = self._memo[t] = self._decide(t)
        return r

    def verdict(self, t) -> Verdict:
        t = q(t)
        if not self.holds(t):
            return _violated(1, t, reason="no-prefix-segments")
        ep = self.endpoints(t)
        return Verdict(HOLDS, endpoints=ep)

    def witness(self, t):
        """Canonical ``(endpoints, Retiming)`` or ``None``."""
        t = q(t)
        if not self.holds(t):
            return None
        if self.mode == "full":
            return self._full_ends, self._full.witness
        if self.mode == "skor":
            return self._skor_witness(t)
        ep = self.endpoints(t)
        s1, e1, s2, e2 = ep
        seg1 = restrict_segment(self.mu1, s1, e1)
        seg2 = restrict_segment(self.mu2, s2, e2)
        v = generic_conf(self.spec, seg1, seg2)
        assert v, "endpoint search and segment check disagree"
        return ep, v.witness

    def endpoints(self, t):
        t = q(t)
        if self.mode == "full":
            return self._full_ends
        if self.mode == "skor":
            w = self._skor_witness(t)
            return None if w is None else w[0]
        for ep in self._combos(t):
            if self._check_combo(ep):
                return ep
        return None

    # -- unbounded tau: the whole traces, independent of t
    @cached_property
    def _full(self) -> Verdict:
        return generic_conf(self.spec, self.mu1, self.mu2)

    @property
    def _full_ends(self):
        return (self.mu1.start, self.mu1.length, self.mu2.start, self.mu2.length)

    # -- windows
    def _starts(self, g: Gtt):
        return _window_points(g, Fraction(0), self.tau)

    def _ends(self, g: Gtt, t):
        return _window_points(g, t - self.tau, t + self.tau)

    def _combos(self, t):
        S1, S2 = self._starts(self.mu1), self._starts(self.mu2)
        E1, E2 = self._ends(self.mu1, t), self._ends(self.mu2, t)
        out = []
        for s1 in S1:
            for e1 in E1:
                if s1 > e1:
                    continue
                for s2 in S2:
                    for e2 in E2:
                        if s2 <= e2:
                            out.append((s1, e1, s2, e2))
        out.sort(key=lambda c: (c[0] + c[2] + abs(c[1] - t) + abs(c[3] - t), c))
        return out

    def _check_combo(self, ep) -> bool:
        if self.mode == "hybrid":
            return self._hybrid_combo(*ep)
        if self.mode == "trace":
            return self._trace_combo(*ep)
        s1, e1, s2, e2 = ep
        return bool(generic_conf(self.spec, restrict_segment(self.mu1, s1, e1),
                                 restrict_segment(self.mu2, s2, e2)))

    def _decide(self, t) -> bool:
        if self.mode == "full":
            return bool(self._full)
        if self.mode == "skor":
            return self._skor_witness(t) is not None
        if self.mode == "hybrid" and self.tau > 0 and t >= 4 * self.tau:
            return self._hybrid_decomposed(t)
        return any(self._check_combo(ep) for ep in self._combos(t))

    # -- trace conformance on segments
    @cached_property
    def _trace_tables(self):
        merged = sorted(set(self.mu1.times) | set(self.mu2.times))
        bad = []
        for t in merged:
            if not (self.mu1.has_point(t) and self.mu2.has_point(t)):
                bad.append(1)
            else:
                dist = _dist(self.spec.metric, self.mu1.point_value(t), self.mu2.point_value(t),
                             self.mu1.names)
                bad.append(1 if dist > self.spec.epsilon else 0)
        pref = [0]
        for b in bad:
            pref.append(pref[-1] + b)
        return merged, pref

    def _trace_combo(self, s1, e1, s2, e2) -> bool:
        if s1 != s2 or e1 != e2:
            return False
        merged, pref = self._trace_tables
        lo, hi = bisect_left(merged, s1), bisect_right(merged, e1)
        return pref[hi] - pref[lo] == 0

    # -- hybrid fast path
    @cached_property
    def _matches(self):
        """Sorted partner times per point, for both directions."""
        eps, d, tau = self.spec.epsilon, self.spec.metric, self.tau

        def table(a: Gtt, b: Gtt):
            out = []
            for t, v in zip(a.times, a.values):
                out.append([b.times[k] for k in b.window(t - tau, t + tau)
                            if _dist(d, v, b.values[k], a.names) <= eps])
            return out
        return table(self.mu1, self.mu2), table(self.mu2, self.mu1)

    def _side_ok(self, a: Gtt, m, s_a, e_a, s_b, e_b) -> bool:
        for k in a.window(s_a, e_a):
            ms = m[k]
            j = bisect_left(ms, s_b)
            if j == len(ms) or ms[j] > e_b:
                return False
        return True

    def _hybrid_combo(self, s1, e1, s2, e2) -> bool:
        m1, m2 = self._matches
        return (self._side_ok(self.mu1, m1, s1, e1, s2, e2)
                and self._side_ok(self.mu2, m2, s2, e2, s1, e1))

    @cached_property
    def _hybrid_start_ok(self) -> bool:
        # some start pair makes every point below 2*tau matchable from above
        tau = self.tau
        m1, m2 = self._matches
        S1, S2 = self._starts(self.mu1), self._starts(self.mu2)
        for s1 in S1:
            for s2 in S2:
                ok = all(m1[k] and m1[k][-1] >= s2
                         for k in self.mu1.window(s1, 2 * tau) if self.mu1.times[k] < 2 * tau)
                ok = ok and all(m2[k] and m2[k][-1] >= s1
                                for k in self.mu2.window(s2, 2 * tau) if self.mu2.times[k] < 2 * tau)
                if ok:
                    return True
        return False

    @cached_property
    def _middle_prefix(self):
        m1, m2 = self._matches
        return ([0] + _cumsum([0 if x else 1 for x in m1]),
                [0] + _cumsum([0 if x else 1 for x in m2]))

    def _hybrid_decomposed(self, t) -> bool:
        tau = self.tau
        if not self._hybrid_start_ok:
            return False
        p1, p2 = self._middle_prefix
        for g, p in ((self.mu1, p1), (self.mu2, p2)):
            lo, hi = bisect_left(g.times, 2 * tau), bisect_right(g.times, t - 2 * tau)
            if lo < hi and p[hi] - p[lo]:
                return False
        m1, m2 = self._matches
        E1, E2 = self._ends(self.mu1, t), self._ends(self.mu2, t)
        for e1 in E1:
            for e2 in E2:
                if self._end_ok(self.mu1, m1, e1, e2, t) and self._end_ok(self.mu2, m2, e2, e1, t):
                    return True
        return False

    def _end_ok(self, a: Gtt, m, e_a, e_b, t) -> bool:
        lo = bisect_right(a.times, t - 2 * self.tau)
        hi = bisect_right(a.times, e_a)
        for k in range(lo, hi):
            if not m[k] or m[k][0] > e_b:
                return False
        return True

    # -- Skorokhod fast path
    @cached_property
    def _skor_best(self):
        S1 = set(self.mu1.window(Fraction(0), self.tau))
        S2 = set(self.mu2.window(Fraction(0), self.tau))
        starts = {(i, j) for i in S1 for j in S2}
        return _skor_dp(self.mu1, self.mu2, self.tau, self.spec.epsilon, self.spec.metric, starts)

    def _skor_witness(self, t):
        best = self._skor_best
        E1 = list(self.mu1.window(t - self.tau, t + self.tau))
        E2 = list(self.mu2.window(t - self.tau, t + self.tau))
        t1, t2 = self.mu1.times, self.mu2.times
        ends = [(abs(t1[i] - t) + abs(t2[j] - t), t1[i], t2[j], (i, j))
                for i in E1 for j in E2 if (i, j) in best]
        if not ends:
            return None
        end = min(ends)[3]
        r = _path_to_retiming(self.mu1, self.mu2, best, end)
        s1, s2 = r.r1[0][0], r.r2[0][0]
        return (s1, t1[end[0]], s2, t2[end[1]]), r


def _cumsum(xs):
    out, acc = [], 0
    for x in xs:
        acc += x
        out.append(acc)
    return out


def pref_conf(spec: ConformanceSpec, mu1: Gtt, mu2: Gtt, t) -> Verdict:
    return PrefixConformance(spec, mu1, mu2).verdict(t)


def pref_wit(spec: ConformanceSpec, mu1: Gtt, mu2: Gtt, t):
    return PrefixConformance(spec, mu1, mu2).witness(t)


def candidate_distances(spec: ConformanceSpec, mu1: Gtt, mu2: Gtt) -> list[Fraction]:
    """Distances between points that some retiming of the family may pair up."""
    tau, d = spec.tau, spec.metric
    out = {Fraction(0)}
    if tau is None or isinstance(spec.family, (Explicit, Composition, Shift)):
        # retimed partners may sit anywhere, so pair up distinct values
        vs1, vs2 = set(mu1.values), set(mu2.values)
        for v in vs1:
            for w in vs2:
                out.add(_dist(d, v, w, mu1.names))
        return sorted(out)
    for t, v in zip(mu1.times, mu1.values):
        for k in mu2.window(t - tau, t + tau):
            out.add(_dist(d, v, mu2.values[k], mu1.names))
    return sorted(out)


def min_eps(check, candidates: list[Fraction]) -> Fraction | None:
    """Least candidate for which the monotone predicate ``check(eps)`` holds."""
    if not candidates or not check(candidates[-1]):
        return None
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if check(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]
