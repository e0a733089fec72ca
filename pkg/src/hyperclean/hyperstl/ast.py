"""Abstract syntax of HyperSTL* formulas and their arithmetic terms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

CLOCK = "c"  # reserved component name: the value of c[p] at time t is t


# ---------------------------------------------------------------------------
# terms


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    """``name[trace]`` or, with ``reg`` set, the frozen ``name*reg[trace]``."""

    name: str
    trace: str
    reg: int | None = None


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Abs(Expr):
    arg: Expr


def expr_vars(e: Expr) -> Iterator[Var]:
    if isinstance(e, Var):
        yield e
    elif isinstance(e, BinOp):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)
    elif isinstance(e, (Neg, Abs)):
        yield from expr_vars(e.arg)


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    left: Expr
    op: str  # <= < >= > == !=
    right: Expr


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    """Sugar for ``!(!a || !b)``, evaluated directly."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    """Sugar for ``!a || b``, evaluated directly."""

    left: Formula
    right: Formula


Interval = tuple  # (a, b) with b None for an unbounded right end
UNBOUNDED: Interval = (Fraction(0), None)


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Freeze(Formula):
    reg: int
    arg: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


# ---------------------------------------------------------------------------
# derived operators


def interval(a=0, b=None) -> Interval:
    a = Fraction(a)
    b = None if b is None else Fraction(b)
    if a < 0 or (b is not None and b < a):
        raise ValueError(f"invalid interval [{a}, {b}]")
    return (a, b)


TRUE = TrueF()


def F(phi: Formula, j: Interval = UNBOUNDED) -> Formula:
    return Until(TRUE, phi, j)


def G(phi: Formula, j: Interval = UNBOUNDED) -> Formula:
    return Not(Until(TRUE, Not(phi), j))


def P(phi: Formula, j: Interval = UNBOUNDED) -> Formula:
    return Since(TRUE, phi, j)


def H(phi: Formula, j: Interval = UNBOUNDED) -> Formula:
    return Not(Since(TRUE, Not(phi), j))


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def desugar(f: Formula) -> Formula:
    """Replace ``And``/``Implies`` by their ``Not``/``Or`` definitions."""
    if isinstance(f, And):
        return Not(Or(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Or(Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, (Until, Since)):
        return type(f)(desugar(f.left), desugar(f.right), f.interval)
    if isinstance(f, Freeze):
        return Freeze(f.reg, desugar(f.arg))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, desugar(f.body))
    return f


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not,)):
        return (f.arg,)
    if isinstance(f, Freeze):
        return (f.arg,)
    if isinstance(f, (Or, And, Implies, Until, Since)):
        return (f.left, f.right)
    if isinstance(f, (Exists, Forall)):
        return (f.body,)
    return ()


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    for c in children(f):
        yield from atoms(c)


def registers(f: Formula) -> set[int]:
    out = set()
    for a in atoms(f):
        for v in (*expr_vars(a.left), *expr_vars(a.right)):
            if v.reg is not None:
                out.add(v.reg)

    def walk(g):
        if isinstance(g, Freeze):
            out.add(g.reg)
        for c in children(g):
            walk(c)
    walk(f)
    return out


def is_fin(f: Formula) -> bool:
    """Every temporal interval is bounded with ``a < b``."""
    if isinstance(f, (Until, Since)):
        a, b = f.interval
        if b is None or not a < b:
            return False
    return all(is_fin(c) for c in children(f))
