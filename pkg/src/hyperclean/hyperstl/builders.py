"""Formula encodings of conformance and cleanness.

Traces are the combined input/output vectors, so every builder takes the
component names it compares.  Metrics become atoms: ``abs`` (max over
components) is a conjunction of per-component bounds, ``l1`` a weighted
sum, and ``expr`` metrics are substituted with bare names reading the
current trace and primed names reading the frozen one.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

from ..traces import ABS, Metric, q
from .ast import (CLOCK, Abs, And, Atom, BinOp, Forall, Formula, Freeze, Implies, Num, Or, Var,
                  F, G, H, P, conj, disj, interval)
from .parser import parse_metric_expr, substitute

Names = Sequence[str]


def _c(trace: str, reg: int | None = None) -> Var:
    return Var(CLOCK, trace, reg)


def dist_atom(d: Metric, eps, comps: Names, cur: str, frozen: str, reg: int) -> Formula:
    """``d(X_cur, X_frozen^{*reg}) <= eps``."""
    eps = Num(q(eps))
    if d.kind == "abs":
        return conj(*(Atom(Abs(BinOp("-", Var(n, cur), Var(n, frozen, reg))), "<=", eps)
                      for n in comps))
    if d.kind == "l1":
        w = d.weights or (Fraction(1),) * len(comps)
        if len(w) != len(comps):
            raise ValueError("weight count does not match the compared components")
        terms = [BinOp("*", Num(wk), Abs(BinOp("-", Var(n, cur), Var(n, frozen, reg))))
                 for wk, n in zip(w, comps)]
        total = terms[0]
        for t in terms[1:]:
            total = BinOp("+", total, t)
        return Atom(total, "<=", eps)
    e = parse_metric_expr(d.expr)

    def bind(v: Var) -> Var:
        if v.name not in comps:
            raise ValueError(f"metric refers to unknown component {v.name!r}")
        return Var(v.name, frozen, reg) if v.trace == "'" else Var(v.name, cur)
    return Atom(substitute(e, bind), "<=", eps)


def _both_ways(tau, eps, d, comps, p1, p2, near) -> Formula:
    return And(G(Freeze(1, near(dist_atom(d, eps, comps, p2, p1, 1)))),
               G(Freeze(2, near(dist_atom(d, eps, comps, p1, p2, 2)))))


def hybrid_conf_formula(tau, eps, d: Metric = ABS, p1: str = "p1", p2: str = "p2",
                        components: Names = ("x",)) -> Formula:
    j = interval(0, tau)
    return _both_ways(tau, eps, d, components, p1, p2, lambda a: disj(P(a, j), F(a, j)))


def trace_conf_formula(eps, d: Metric = ABS, p1: str = "p1", p2: str = "p2",
                       components: Names = ("x",)) -> Formula:
    j = interval(0, 0)
    return _both_ways(0, eps, d, components, p1, p2, lambda a: F(a, j))


def robust_clean_formula(eps_i, eps_o, inputs: Names = ("x",), outputs: Names = ("y",),
                         d_i: Metric = ABS, d_o: Metric = ABS,
                         p1: str = "p1", p2: str = "p2") -> Formula:
    now = interval(0, 0)
    phi_i = And(Freeze(1, F(dist_atom(d_i, eps_i, inputs, p2, p1, 1), now)),
                Freeze(2, F(dist_atom(d_i, eps_i, inputs, p1, p2, 2), now)))
    phi_o = And(Freeze(3, F(dist_atom(d_o, eps_o, outputs, p2, p1, 3), now)),
                Freeze(4, F(dist_atom(d_o, eps_o, outputs, p1, p2, 4), now)))
    return Forall(p1, Forall(p2, G(Implies(H(phi_i), phi_o))))


# ---------------------------------------------------------------------------
# prefix conformance and hybrid cleanness


def match_formula(tau, eps, d: Metric, comps: Names, pi: str, i: int, other: str,
                  s: int, e: int) -> Formula:
    """A point of ``other`` within ``tau`` whose value is ``eps``-close to the one
    frozen in register ``i`` on ``pi`` and whose time lies in ``[T(s), T(e)]``."""
    body = conj(dist_atom(d, eps, comps, other, pi, i),
                Atom(_c(other), ">=", _c(other, s)),
                Atom(_c(other), "<=", _c(other, e)))
    j = interval(0, tau)
    return Freeze(i, Or(P(body, j), F(body, j)))


def _conf_part(tau, eps, d, comps, p1, p2, s1, e1, s2, e2) -> Formula:
    def inside(p, s, e):
        return And(Atom(_c(p), ">=", _c(p, s)), Atom(_c(p), "<=", _c(p, e)))
    return And(H(Implies(inside(p1, s1, e1), match_formula(tau, eps, d, comps, p1, 1, p2, s2, e2))),
               H(Implies(inside(p2, s2, e2), match_formula(tau, eps, d, comps, p2, 2, p1, s1, e1))))


def _chain(labels, owner, tau, anchor: str, conf: Formula, first) -> Formula:
    """Freeze registers 3..6 along ``labels`` in time order, innermost first."""
    tau_q = Num(q(tau))
    inner = conf
    for k in range(len(labels) - 1, -1, -1):
        reg, lab = 3 + k, labels[k]
        trace = owner[lab]
        if lab.startswith("s"):
            guard = Atom(_c(trace), "<=", tau_q)
        else:
            guard = And(Atom(_c(trace), ">=", BinOp("-", _c(anchor, 7), tau_q)),
                        Atom(_c(trace), "<=", BinOp("+", _c(anchor, 7), tau_q)))
        step = And(guard, Freeze(reg, inner))
        inner = first(step) if k == 0 else F(step)
    return inner


VERBATIM, GENERAL = "verbatim", "general"


def _orders(variant: str):
    """Time orders of the four segment endpoints ``s1 e1 s2 e2``."""
    out = []
    for perm in permutations(("s1", "e1", "s2", "e2")):
        if perm.index("s1") > perm.index("e1") or perm.index("s2") > perm.index("e2"):
            continue
        if variant == VERBATIM and not set(perm[:2]) == {"s1", "s2"}:
            continue
        out.append(perm)
    return out


def pref_conf_formula(tau, eps, d: Metric = ABS, components: Names = ("x",),
                      p1: str = "p1", p2: str = "p2", variant: str = VERBATIM) -> Formula:
    """Prefix conformance under hybrid conformance as a disjunction over endpoint orders.

    ``verbatim`` lists the four orders with both starts first and reaches the
    first endpoint in the past.  ``general`` lists all six orders compatible
    with ``s <= e`` per trace and lets the first endpoint lie in the future
    too, which covers short prefixes with ``t < tau`` and segments that do
    not overlap.
    """
    if variant not in (VERBATIM, GENERAL):
        raise ValueError(f"unknown variant {variant!r}")
    owner = {"s1": p1, "e1": p1, "s2": p2, "e2": p2}
    first = P if variant == VERBATIM else (lambda f: Or(P(f), F(f)))
    disjuncts = []
    for order in _orders(variant):
        reg = {lab: 3 + k for k, lab in enumerate(order)}
        conf = _conf_part(tau, eps, d, components, p1, p2,
                          reg["s1"], reg["e1"], reg["s2"], reg["e2"])
        disjuncts.append(And(Freeze(7, _chain(order, owner, tau, p1, conf, first)),
                             Freeze(7, _chain(order, owner, tau, p2, conf, first))))
    return disj(*disjuncts)


def hybrid_clean_formula(tau_i, eps_i, tau_o, eps_o, inputs: Names = ("x",),
                         outputs: Names = ("y",), d_i: Metric = ABS, d_o: Metric = ABS,
                         p1: str = "p1", p2: str = "p2", variant: str = VERBATIM) -> Formula:
    pi = pref_conf_formula(tau_i, eps_i, d_i, inputs, p1, p2, variant)
    po = pref_conf_formula(tau_o, eps_o, d_o, outputs, p1, p2, variant)
    return Forall(p1, Forall(p2, G(Implies(H(pi), po))))
