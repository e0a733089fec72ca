"""Three-valued evaluation of HyperSTL* formulas over a finite set of traces.

Time is dense.  For every subformula we compute, given a trace assignment
and register valuation, a finite set of breakpoints such that its value is
constant on each open interval between consecutive breakpoints.  Until and
Since then only need to visit breakpoints and one representative per open
interval, which makes evaluation exact rather than sampled.

Registers frozen on piecewise-linear traces (or frozen clocks on
non-discrete traces) make the value of a freeze depend jointly on the
current time and the stored time; there the breakpoint set is a sound
over-approximation only when the nested operators are Boolean, and the
result is flagged inexact.
"""

from __future__ import annotations

from bisect import bisect_left
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from ..traces import DISCRETE, PIECEWISE_LINEAR, Gtt, SystemTrace, TraceSet, q, sample
from .ast import (CLOCK, Abs, And, Atom, BinOp, Exists, Expr, Forall, Formula, Freeze,
                  Implies, Neg, Not, Num, Or, Since, TrueF, Until, Var, children, expr_vars)


class Truth(str, Enum):
    T = "T"
    F = "F"
    U = "U"

    def __str__(self):
        return self.value


T, F, U = Truth.T, Truth.F, Truth.U
ZERO = Fraction(0)


class _Moving:
    """Register placeholder meaning "equal to the current time"."""

    def __repr__(self):
        return "MOVING"


MOVING = _Moving()


def traces_of(H) -> dict[str, Gtt]:
    """Normalise a trace set into an ordered id -> Gtt mapping."""
    if isinstance(H, TraceSet):
        H = H.traces
    if isinstance(H, Mapping):
        return {str(k): v for k, v in H.items()}
    out = {}
    for k, item in enumerate(H):
        if isinstance(item, SystemTrace):
            out[item.id] = item.input if item.checkpoint_output else item.combined()
        else:
            out[f"mu{k + 1}"] = item
    return out


# ---------------------------------------------------------------------------
# static information about formulas


class _Info:
    __slots__ = ("free_regs", "free_vars", "starred")

    def __init__(self, free_regs, free_vars, starred):
        self.free_regs = free_regs  # registers read and not rebound below
        self.free_vars = free_vars  # trace variables not bound below
        self.starred = starred      # reg -> trace vars of every x*reg occurrence


def _atom_vars(a: Atom):
    return (*expr_vars(a.left), *expr_vars(a.right))


def _compute_info(f: Formula, cache: dict) -> _Info:
    got = cache.get(id(f))
    if got is not None:
        return got[1]
    if isinstance(f, Atom):
        vs = _atom_vars(f)
        regs = frozenset(v.reg for v in vs if v.reg is not None)
        tv = frozenset(v.trace for v in vs)
        starred: dict = {}
        for v in vs:
            if v.reg is not None:
                starred.setdefault(v.reg, set()).add(v.trace)
        info = _Info(regs, tv, {k: frozenset(s) for k, s in starred.items()})
    else:
        kids = [_compute_info(c, cache) for c in children(f)]
        regs = frozenset().union(*(k.free_regs for k in kids))
        tv = frozenset().union(*(k.free_vars for k in kids))
        starred = {}
        for k in kids:
            for r, s in k.starred.items():
                starred[r] = starred.get(r, frozenset()) | s
        if isinstance(f, Freeze):
            regs = regs - {f.reg}
        if isinstance(f, (Exists, Forall)):
            tv = tv - {f.var}
        info = _Info(regs, tv, starred)
    cache[id(f)] = (f, info)  # keep f alive so its id stays unique
    return info


# ---------------------------------------------------------------------------
# terms


def _var_time(v: Var, regs: dict, t):
    if v.reg is None:
        return t
    r = regs.get(v.reg, ZERO)
    return t if r is MOVING else r


class Evaluator:
    """Evaluate formulas against one trace set, memoising across calls."""

    def __init__(self, H):
        self.traces = traces_of(H)
        self.order = list(self.traces)
        self._info: dict = {}
        self._val: dict = {}
        self._bp: dict = {}
        self.exact = True

    # -- helpers
    def info(self, f: Formula) -> _Info:
        return _compute_info(f, self._info)

    def _trace(self, var: str, assign: dict) -> Gtt:
        try:
            return self.traces[assign[var]]
        except KeyError:
            raise ValueError(f"trace variable {var!r} is not bound") from None

    def _key(self, f: Formula, assign: dict, regs: dict):
        inf = self.info(f)
        a = tuple(sorted((v, assign[v]) for v in inf.free_vars if v in assign))
        r = tuple((k, regs.get(k, ZERO)) for k in sorted(inf.free_regs))
        return (id(f), a, r)

    def term(self, e: Expr, assign: dict, regs: dict, t) -> Fraction | None:
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Var):
            g = self._trace(e.trace, assign)
            at = _var_time(e, regs, t)
            if e.name == CLOCK and CLOCK not in g.names:
                return at if g.defined_at(at) else None
            vec = sample(g, at)
            return None if vec is None else vec[g.component(e.name)]
        if isinstance(e, Neg):
            x = self.term(e.arg, assign, regs, t)
            return None if x is None else -x
        if isinstance(e, Abs):
            x = self.term(e.arg, assign, regs, t)
            return None if x is None else abs(x)
        a = self.term(e.left, assign, regs, t)
        b = self.term(e.right, assign, regs, t)
        if a is None or b is None:
            return None
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:
            return None
        return a / b

    def atom(self, f: Atom, assign: dict, regs: dict, t) -> Truth:
        a = self.term(f.left, assign, regs, t)
        if a is None:
            return U
        b = self.term(f.right, assign, regs, t)
        if b is None:
            return U
        op = f.op
        ok = (a <= b if op == "<=" else a < b if op == "<" else a >= b if op == ">="
              else a > b if op == ">" else a == b if op == "==" else a != b)
        return T if ok else F

    # -- values
    def value(self, f: Formula, assign: dict, regs: dict, t) -> Truth:
        if isinstance(f, Atom):
            return self.atom(f, assign, regs, t)
        if isinstance(f, TrueF):
            return T
        if isinstance(f, (Until, Since)) and t > 0:
            bl, bs, exact = self.breakpoints(f, assign, regs)
            if exact and t not in bs:
                t = _representative(bl, t)
        key = self._key(f, assign, regs) + (t,)
        got = self._val.get(key)
        if got is not None:
            return got
        v = self._value(f, assign, regs, t)
        self._val[key] = v
        return v

    def _value(self, f, assign, regs, t) -> Truth:
        if isinstance(f, Not):
            v = self.value(f.arg, assign, regs, t)
            return F if v is T else T if v is F else U
        if isinstance(f, (Or, And, Implies)):
            a = self.value(f.left, assign, regs, t)
            if isinstance(f, Implies):
                a = F if a is T else T if a is F else U
            if isinstance(f, And):
                if a is F:
                    return F
                b = self.value(f.right, assign, regs, t)
                return F if b is F else T if (a is T and b is T) else U
            if a is T:
                return T
            b = self.value(f.right, assign, regs, t)
            return T if b is T else F if (a is F and b is F) else U
        if isinstance(f, Until):
            return self._until(f, assign, regs, t)
        if isinstance(f, Since):
            return self._since(f, assign, regs, t)
        if isinstance(f, Freeze):
            if not self._guard(f, assign, t):
                return U
            r2 = dict(regs)
            r2[f.reg] = t
            return self.value(f.arg, assign, r2, t)
        if isinstance(f, (Exists, Forall)):
            vals = []
            for tid in self.order:
                a2 = dict(assign)
                a2[f.var] = tid
                v = self.value(f.body, a2, regs, t)
                if isinstance(f, Exists) and v is T:
                    return T
                if isinstance(f, Forall) and v is F:
                    return F
                vals.append(v)
            return F if isinstance(f, Exists) else T
        raise TypeError(f"not a formula: {f!r}")

    def _guard(self, f: Freeze, assign, t) -> bool:
        for var in self.info(f.arg).starred.get(f.reg, ()):
            # vars bound inside the freeze are checked by their own atoms
            if var in assign and not self._trace(var, assign).defined_at(t):
                return False
        return True

    def _until(self, f: Until, assign, regs, t) -> Truth:
        a, b = f.interval
        lo = t + a
        hi = None if b is None else t + b
        _, s1, _ = self.breakpoints(f.left, assign, regs)
        _, s2, _ = self.breakpoints(f.right, assign, regs)
        pts = {t, lo} | {s for s in s1 | s2 if s > t}
        if hi is not None:
            pts.add(hi)
            pts = {p for p in pts if p <= hi}
        pts = sorted(pts)
        elems = []
        for k, p in enumerate(pts):
            elems.append(p)
            if k + 1 < len(pts):
                elems.append((p + pts[k + 1]) / 2)
            elif hi is None:
                elems.append(p + 1)
        ok = True
        for x in elems:
            in_j = x >= lo and (hi is None or x <= hi)
            cand = in_j and self.value(f.right, assign, regs, x) is T
            if cand and ok:
                return T
            if not cand and self.value(f.left, assign, regs, x) is F:
                return F
        return F

    def _since(self, f: Since, assign, regs, t) -> Truth:
        a, b = f.interval
        hi = t - a
        if hi < 0:
            return F
        lo = ZERO if b is None else max(ZERO, t - b)
        _, s1, _ = self.breakpoints(f.left, assign, regs)
        _, s2, _ = self.breakpoints(f.right, assign, regs)
        pts = {t, hi, lo} | {s for s in s1 | s2 if lo <= s < t}
        pts = sorted(pts, reverse=True)
        elems = []
        for k, p in enumerate(pts):
            elems.append(p)
            if k + 1 < len(pts):
                elems.append((p + pts[k + 1]) / 2)
        for x in elems:
            in_j = lo <= x <= hi
            cand = in_j and self.value(f.right, assign, regs, x) is T
            if cand:
                return T
            if self.value(f.left, assign, regs, x) is F:
                return F
        return F

    # -- breakpoints
    def breakpoints(self, f: Formula, assign: dict, regs: dict):
        """``(sorted list, set, exact)`` of instants where the value may change."""
        key = self._key(f, assign, regs)
        got = self._bp.get(key)
        if got is None:
            pts, exact = self._breakpoints(f, assign, regs)
            pts = {p for p in pts if p >= 0} | {ZERO}
            got = (sorted(pts), frozenset(pts), exact)
            self._bp[key] = got
            if not exact:
                self.exact = False
        return got

    def _breakpoints(self, f, assign, regs):
        if isinstance(f, TrueF):
            return set(), True
        if isinstance(f, Atom):
            return self._atom_breakpoints(f, assign, regs)
        if isinstance(f, (Not, Or, And, Implies)):
            out, exact = set(), True
            for c in children(f):
                _, s, e = self.breakpoints(c, assign, regs)
                out |= s
                exact &= e
            return out, exact
        if isinstance(f, (Until, Since)):
            _, s1, e1 = self.breakpoints(f.left, assign, regs)
            _, s2, e2 = self.breakpoints(f.right, assign, regs)
            s = s1 | s2
            a, b = f.interval
            sign = -1 if isinstance(f, Until) else 1
            out = set(s) | {x + sign * a for x in s}
            if b is not None:
                out |= {x + sign * b for x in s}
            if isinstance(f, Since):
                out |= {a} | ({b} if b is not None else set())
            return out, e1 and e2
        if isinstance(f, Freeze):
            return self._freeze_breakpoints(f, assign, regs)
        if isinstance(f, (Exists, Forall)):
            out, exact = set(), True
            for tid in self.order:
                a2 = dict(assign)
                a2[f.var] = tid
                _, s, e = self.breakpoints(f.body, a2, regs)
                out |= s
                exact &= e
            return out, exact
        raise TypeError(f"not a formula: {f!r}")

    def _freeze_breakpoints(self, f: Freeze, assign, regs):
        inf = self.info(f.arg)
        star = inf.starred.get(f.reg, ())
        if any(v not in assign for v in star):
            # register read through a quantifier below: fall back to sampling
            out = {p for g in self.traces.values() for p in g.times}
            r2 = dict(regs)
            r2[f.reg] = MOVING
            _, s, _ = self.breakpoints(f.arg, assign, r2)
            return out | s, False
        guard = [self._trace(v, assign) for v in star]
        if not guard:
            _, s, e = self.breakpoints(f.arg, assign, regs)
            return set(s), e
        discrete = [g for g in guard if g.interp == DISCRETE]
        if any(g.empty for g in guard):
            return set(), True
        if discrete:
            # off the grid the guard fails, so the value is U there
            pts = set(discrete[0].times)
            for g in discrete[1:]:
                pts &= set(g.times)
            for g in guard:
                pts = {p for p in pts if g.defined_at(p)}
            return pts, True
        lo = max(g.times[0] for g in guard)
        hi = min(g.times[-1] for g in guard)
        if lo > hi:
            return set(), True
        free = self._free_reg_vars(f.arg, f.reg)
        cells = {lo, hi}
        for var, name in free:
            g = self._trace(var, assign)
            cells |= {p for p in g.times if lo <= p <= hi}
        cells = sorted(cells)
        smooth = any(name == CLOCK or self._trace(var, assign).interp == PIECEWISE_LINEAR
                     for var, name in free)
        out = set(cells)
        if smooth:
            r2 = dict(regs)
            r2[f.reg] = MOVING
            _, s, _ = self.breakpoints(f.arg, assign, r2)
            return out | s, False
        exact = True
        for u, v in zip(cells, cells[1:]):
            r2 = dict(regs)
            r2[f.reg] = (u + v) / 2
            _, s, e = self.breakpoints(f.arg, assign, r2)
            out |= {x for x in s if u < x < v}
            exact &= e
        return out, exact

    def _free_reg_vars(self, f: Formula, reg: int) -> set:
        """``(trace var, component)`` of the occurrences of register ``reg`` read by ``f``."""
        out = set()

        def walk(g):
            if isinstance(g, Freeze) and g.reg == reg:
                return
            if isinstance(g, Atom):
                out.update((v.trace, v.name) for v in _atom_vars(g) if v.reg == reg)
            for c in children(g):
                walk(c)
        walk(f)
        return out

    def _atom_breakpoints(self, f: Atom, assign, regs):
        moving = []
        for v in _atom_vars(f):
            if v.reg is None or regs.get(v.reg, ZERO) is MOVING:
                moving.append(self._trace(v.trace, assign))
        if not moving:
            return set(), True
        discrete = [g for g in moving if g.interp == DISCRETE]
        if discrete:
            out = set()
            for g in discrete:
                out |= set(g.times)
            return out, True
        if any(g.empty for g in moving):
            return set(), True
        grid = set()
        for g in moving:
            grid |= set(g.times)
        lo = max(g.times[0] for g in moving)
        hi = min(g.times[-1] for g in moving)
        grid = sorted(grid)
        out = set(grid)
        diff = BinOp("-", f.left, f.right)
        exact = _linear(diff)
        for u, v in zip(grid, grid[1:]):
            if lo <= u and v <= hi:
                out |= self._zeros(diff, assign, regs, u, v)
        return out, exact

    def _zeros(self, e: Expr, assign, regs, u, v) -> set:
        """Zeros of a piecewise-linear term inside the open interval ``(u, v)``."""
        kinks = set()
        for sub in _abs_args(e):
            kinks |= self._zeros(sub, assign, regs, u, v)
        pts = [u, *sorted(kinks), v]
        out = set(kinks)
        for p, r in zip(pts, pts[1:]):
            t1, t2 = p + (r - p) / 3, p + 2 * (r - p) / 3
            f1 = self.term(e, assign, regs, t1)
            f2 = self.term(e, assign, regs, t2)
            if f1 is None or f2 is None or f1 == f2:
                continue
            root = t1 - f1 * (t2 - t1) / (f2 - f1)
            if p < root < r:
                out.add(root)
        return out


def _abs_args(e: Expr):
    if isinstance(e, Abs):
        yield e.arg
    elif isinstance(e, BinOp):
        yield from _abs_args(e.left)
        yield from _abs_args(e.right)
    elif isinstance(e, Neg):
        yield from _abs_args(e.arg)


def _constant(e: Expr) -> bool:
    return not any(True for _ in expr_vars(e))


def _linear(e: Expr) -> bool:
    if isinstance(e, BinOp):
        if e.op == "*" and not (_constant(e.left) or _constant(e.right)):
            return False
        if e.op == "/" and not _constant(e.right):
            return False
        return _linear(e.left) and _linear(e.right)
    if isinstance(e, (Neg, Abs)):
        return _linear(e.arg)
    return True


def _representative(bl: list, t):
    k = bisect_left(bl, t)
    if k == len(bl):
        return bl[-1] + 1
    return (bl[k - 1] + bl[k]) / 2


# ---------------------------------------------------------------------------
# public entry points


def value(phi: Formula, H, assignment: Mapping[str, str] | None = None,
          registers: Mapping[int, object] | Sequence | None = None, t=0,
          evaluator: Evaluator | None = None) -> Truth:
    """``Value(phi, H, Pi, T, t)``; registers default to all zeros."""
    ev = evaluator or Evaluator(H)
    if registers is None:
        regs = {}
    elif isinstance(registers, Mapping):
        regs = {int(k): q(v) for k, v in registers.items()}
    else:
        regs = {k + 1: q(v) for k, v in enumerate(registers)}
    return ev.value(phi, dict(assignment or {}), regs, q(t))


def satisfies(H, phi: Formula, evaluator: Evaluator | None = None) -> bool:
    ev = evaluator or Evaluator(H)
    unbound = ev.info(phi).free_vars
    if unbound:
        raise ValueError(f"formula is not closed: free trace variables {sorted(unbound)}")
    return ev.value(phi, {}, {}, ZERO) is T
