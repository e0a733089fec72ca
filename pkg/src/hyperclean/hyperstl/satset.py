"""Bottom-up satisfaction sets for quantifier-free formulas.

Restricted to piecewise-constant signals on one shared grid over
``[0, B]``, at most two registers, bounded intervals and no clock atoms.
Under these restrictions a register only matters through the grid cell
(a grid point or the open interval between two) it falls in, so a set is
stored as one exact indicator over ``t`` per tuple of register cells.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

from ..conformance import CapabilityError
from ..traces import PIECEWISE_CONSTANT, Gtt, q
from .ast import (CLOCK, And, Atom, Exists, Forall, Formula, Freeze, Implies, Not, Or, Since,
                  TrueF, Until, atoms, children, expr_vars, is_fin, registers)
from .evaluate import Evaluator, T

ZERO = Fraction(0)


@dataclass(frozen=True)
class Indicator:
    """A subset of ``[0, B]`` constant on each point and open gap of ``pts``."""

    pts: tuple[Fraction, ...]
    at: tuple[bool, ...]   # membership of each point
    gap: tuple[bool, ...]  # membership of each open gap (pts[k], pts[k+1])

    def __contains__(self, t) -> bool:
        k = bisect_left(self.pts, t)
        if k < len(self.pts) and self.pts[k] == t:
            return self.at[k]
        if k == 0 or k == len(self.pts):
            return False
        return self.gap[k - 1]

    @classmethod
    def build(cls, pts, member) -> "Indicator":
        pts = tuple(sorted(set(pts)))
        return cls(pts, tuple(member(p) for p in pts),
                   tuple(member((a + b) / 2) for a, b in zip(pts, pts[1:])))

    def intervals(self):
        """Maximal intervals as ``(lo, lo_closed, hi, hi_closed)``."""
        out = []
        cur = None
        n = len(self.pts)
        for k in range(n):
            p = self.pts[k]
            if self.at[k]:
                if cur is None:
                    cur = [p, True]
            elif cur is not None:
                out.append((cur[0], cur[1], p, False))
                cur = None
            if k + 1 < n:
                if self.gap[k]:
                    if cur is None:
                        cur = [p, False]
                elif cur is not None:
                    out.append((cur[0], cur[1], p, self.at[k]))
                    cur = None
        if cur is not None:
            out.append((cur[0], cur[1], self.pts[-1], True))
        return out


@dataclass(frozen=True)
class Box:
    """``t``-interval times one grid cell per register."""

    t: tuple  # (lo, lo_closed, hi, hi_closed)
    regs: tuple  # per register: (lo, lo_closed, hi, hi_closed)

    def contains(self, t, regs) -> bool:
        return all(_in(iv, x) for iv, x in zip((self.t, *self.regs), (t, *regs)))


def _in(iv, x) -> bool:
    lo, lc, hi, hc = iv
    return (lo < x or (lc and x == lo)) and (x < hi or (hc and x == hi))


@dataclass(frozen=True)
class SatSet:
    registers: tuple[int, ...]
    boxes: tuple[Box, ...]
    bound: Fraction

    def contains(self, t, regs: Mapping[int, object] | None = None) -> bool:
        regs = regs or {}
        vals = tuple(q(regs.get(r, 0)) for r in self.registers)
        return any(b.contains(q(t), vals) for b in self.boxes)


class _Builder:
    def __init__(self, phi: Formula, kappa: Mapping[str, Gtt]):
        self.ev = Evaluator(dict(kappa))
        self.assign = {v: v for v in kappa}
        grids = {g.times for g in kappa.values()}
        self.grid = next(iter(grids))
        self.B = self.grid[-1]
        self.regs = tuple(sorted(registers(phi)))
        # register cells: (lo, lo_closed, hi, hi_closed) and a representative
        cells = []
        for k, p in enumerate(self.grid):
            cells.append(((p, True, p, True), p))
            if k + 1 < len(self.grid):
                nxt = self.grid[k + 1]
                cells.append(((p, False, nxt, False), (p + nxt) / 2))
        self.cells = cells
        self.combos = list(product(range(len(cells)), repeat=len(self.regs)))
        self.base = tuple(sorted(set(self.grid) | {ZERO, self.B}))

    def cell_of(self, x) -> int:
        k = bisect_right(self.grid, x) - 1
        return 2 * k if self.grid[k] == x else 2 * k + 1

    def reg_values(self, combo) -> dict:
        return {r: self.cells[c][1] for r, c in zip(self.regs, combo)}

    def sat(self, f: Formula) -> dict:
        """Map from register-cell tuple to the ``t``-indicator of the set."""
        if isinstance(f, TrueF):
            full = Indicator.build(self.base, lambda t: True)
            return {c: full for c in self.combos}
        if isinstance(f, Atom):
            out = {}
            for c in self.combos:
                regs = self.reg_values(c)
                out[c] = Indicator.build(
                    self.base, lambda t: self.ev.atom(f, self.assign, regs, t) is T)
            return out
        if isinstance(f, Not):
            s = self.sat(f.arg)
            return {c: Indicator(i.pts, tuple(not x for x in i.at), tuple(not x for x in i.gap))
                    for c, i in s.items()}
        if isinstance(f, (Or, And, Implies)):
            a, b = self.sat(f.left), self.sat(f.right)
            op = {Or: lambda x, y: x or y, And: lambda x, y: x and y,
                  Implies: lambda x, y: (not x) or y}[type(f)]
            return {c: Indicator.build(a[c].pts + b[c].pts,
                                       lambda t, c=c: op(t in a[c], t in b[c]))
                    for c in self.combos}
        if isinstance(f, (Until, Since)):
            a, b = self.sat(f.left), self.sat(f.right)
            return {c: self._temporal(f, a[c], b[c]) for c in self.combos}
        if isinstance(f, Freeze):
            s = self.sat(f.arg)
            k = self.regs.index(f.reg)
            out = {}
            for c in self.combos:
                def member(t, c=c):
                    c2 = list(c)
                    c2[k] = self.cell_of(t)
                    return t in s[tuple(c2)]
                pts = set(self.base)
                for c2, ind in s.items():
                    if all(x == y for j, (x, y) in enumerate(zip(c, c2)) if j != k):
                        pts |= set(ind.pts)
                out[c] = Indicator.build(pts, member)
            return out
        raise CapabilityError(f"unsupported node {type(f).__name__} in sat_set")

    def _temporal(self, f, A: Indicator, Bs: Indicator) -> Indicator:
        a, b = f.interval
        s = set(A.pts) | set(Bs.pts)
        if isinstance(f, Until):
            pts = s | {x - a for x in s} | {x - b for x in s}
        else:
            pts = s | {x + a for x in s} | {x + b for x in s} | {a, b}
        pts = {p for p in pts if 0 <= p <= self.B} | {ZERO, self.B}
        sorted_s = sorted(s)

        def member(t):
            if isinstance(f, Until):
                lo, hi = t + a, min(t + b, self.B)
                if lo > self.B:
                    return False
                cut = {t, lo, hi} | {x for x in sorted_s if t < x < hi}
                seq = sorted(cut)
            else:
                lo, hi = max(ZERO, t - b), t - a
                if hi < 0:
                    return False
                cut = {t, lo, hi} | {x for x in sorted_s if lo < x < t}
                seq = sorted(cut, reverse=True)
            elems = []
            for k, p in enumerate(seq):
                elems.append(p)
                if k + 1 < len(seq):
                    elems.append((p + seq[k + 1]) / 2)
            for x in elems:
                in_j = lo <= x <= hi
                cand = in_j and x in Bs
                if cand:
                    return True
                if x not in A:
                    return False
            return False
        return Indicator.build(pts, member)


def sat_set(phi: Formula, kappa: Mapping[str, Gtt]) -> SatSet:
    """Satisfaction set of quantifier-free ``phi`` over the traces ``kappa``.

    ``kappa`` maps each trace variable of ``phi`` to its signal.
    """
    _check(phi, kappa)
    b = _Builder(phi, kappa)
    s = b.sat(phi)
    boxes = []
    for combo, ind in s.items():
        regs = tuple(b.cells[c][0] for c in combo)
        boxes.extend(Box(iv, regs) for iv in ind.intervals())
    return SatSet(b.regs, tuple(boxes), b.B)


def _check(phi: Formula, kappa: Mapping[str, Gtt]):
    def walk(g):
        if isinstance(g, (Exists, Forall)):
            raise CapabilityError("sat_set needs a quantifier-free formula; use value()")
        for c in children(g):
            walk(c)
    walk(phi)
    if not is_fin(phi):
        raise CapabilityError("sat_set needs bounded intervals [a,b] with a < b; use value()")
    if len(registers(phi)) > 2:
        raise CapabilityError("sat_set supports at most two registers; use value()")
    if not kappa:
        raise CapabilityError("sat_set needs at least one signal")
    for g in kappa.values():
        if g.interp != PIECEWISE_CONSTANT:
            raise CapabilityError("sat_set supports piecewise-constant signals only; use value()")
        if g.empty or g.times[0] != 0:
            raise CapabilityError("signals must start at time 0")
    if len({g.times for g in kappa.values()}) != 1:
        raise CapabilityError("all signals must share one grid")
    for a in atoms(phi):
        for v in (*expr_vars(a.left), *expr_vars(a.right)):
            if v.name == CLOCK:
                raise CapabilityError("clock atoms are not supported by sat_set; use value()")
            if v.trace not in kappa:
                raise CapabilityError(f"no signal for trace variable {v.trace!r}")
