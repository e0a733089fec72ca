"""Concrete syntax for HyperSTL* formulas: tokenizer, parser and printer.

Grammar, loosest binding first::

    formula  := ('forall' | 'exists') ID '.' formula | implies
    implies  := or ('->' implies)?
    or       := and ('||' and)*
    and      := until ('&&' until)*
    until    := unary (('U' | 'S') interval? unary)*
    unary    := '!' unary | ('F'|'G'|'P'|'H') interval? unary | '*' INT unary
              | 'true' | 'false' | '(' formula ')' | atom
    atom     := expr CMP expr
    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := NUM | '-' factor | 'abs' '(' expr ')' | '(' expr ')' | var
    var      := ID ('*' INT)? '[' ID ']'
    interval := '[' NUM ',' (NUM | 'inf') (']' | ')')
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from ..traces import fmt_q
from .ast import (CLOCK, TRUE, UNBOUNDED, Abs, And, Atom, BinOp, Exists, Expr, Forall,
                  Formula, Freeze, Implies, Neg, Not, Num, Or, Since, TrueF, Until, Var,
                  expr_vars, interval)


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.column = line, col


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<op>->|\|\||&&|<=|>=|==|!=|[<>!()\[\],.*+\-/'])
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
""", re.VERBOSE)

CMP_OPS = ("<=", "<", ">=", ">", "==", "!=")
_TEMPORAL = {"F", "G", "P", "H"}


def _tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, metric_mode: bool = False):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.metric_mode = metric_mode

    # -- token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value, k=0) -> bool:
        kind, v, _ = self.peek(k)
        return v == value and kind in ("op", "id")

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            self.fail(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def fail(self, msg, pos=None):
        raise FormulaSyntaxError(msg, self.text, self.peek()[2] if pos is None else pos)

    def number(self) -> Fraction:
        kind, v, pos = self.take()
        if kind != "num":
            self.fail(f"expected a number, found {v!r}", pos)
        return Fraction(v)

    # -- formulas
    def formula(self) -> Formula:
        if self.at("forall") or self.at("exists"):
            q = self.take()[1]
            kind, var, pos = self.take()
            if kind != "id":
                self.fail("expected a trace variable", pos)
            self.expect(".")
            body = self.formula()
            return Forall(var, body) if q == "forall" else Exists(var, body)
        return self.implies()

    def implies(self) -> Formula:
        left = self.or_()
        if self.at("->"):
            self.take()
            return Implies(left, self.implies())
        return left

    def or_(self) -> Formula:
        f = self.and_()
        while self.at("||"):
            self.take()
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.until()
        while self.at("&&"):
            self.take()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        f = self.unary()
        while self.at("U") or self.at("S"):
            op = self.take()[1]
            j = self.interval()
            g = self.unary()
            f = Until(f, g, j) if op == "U" else Since(f, g, j)
        return f

    def interval(self):
        if not self.at("["):
            return UNBOUNDED
        self.take()
        a = self.number()
        self.expect(",")
        if self.at("inf"):
            self.take()
            b = None
        else:
            b = self.number()
        kind, v, pos = self.take()
        if v not in ("]", ")") or (v == ")" and b is not None):
            self.fail("expected ']'", pos)
        try:
            return interval(a, b)
        except ValueError as e:
            self.fail(str(e), pos)

    def unary(self) -> Formula:
        kind, v, pos = self.peek()
        if v == "!" and kind == "op":
            self.take()
            return Not(self.unary())
        if kind == "id" and v in _TEMPORAL and not self.at("[", 1) or (
                kind == "id" and v in _TEMPORAL and self._interval_follows()):
            self.take()
            j = self.interval()
            arg = self.unary()
            if v == "F":
                return Until(TRUE, arg, j)
            if v == "G":
                return Not(Until(TRUE, Not(arg), j))
            if v == "P":
                return Since(TRUE, arg, j)
            return Not(Since(TRUE, Not(arg), j))
        if v == "*" and kind == "op":
            self.take()
            k, n, p = self.take()
            if k != "num" or not n.isdigit():
                self.fail("expected a register index", p)
            return Freeze(int(n), self.unary())
        if v == "true" and kind == "id":
            self.take()
            return TRUE
        if v == "false" and kind == "id":
            self.take()
            return Not(TRUE)
        if v == "(":
            save = self.i
            self.take()
            try:
                f = self.formula()
                self.expect(")")
                return f
            except FormulaSyntaxError:
                self.i = save
        return self.atom()

    def _interval_follows(self) -> bool:
        # "F[" starts an interval unless it is a component named F, i.e. F[p]
        return self.at("[", 1) and self.peek(2)[0] == "num"

    def atom(self) -> Formula:
        left = self.expr()
        kind, v, pos = self.take()
        if v not in CMP_OPS:
            self.fail(f"expected a comparison, found {v or 'end of input'!r}", pos)
        return Atom(left, v, self.expr())

    # -- terms
    def expr(self) -> Expr:
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.at("*") or self.at("/"):
            op = self.take()[1]
            e = BinOp(op, e, self.factor())
        return e

    def factor(self) -> Expr:
        kind, v, pos = self.peek()
        if kind == "num":
            return Num(self.number())
        if v == "-":
            self.take()
            return Neg(self.factor())
        if v == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if kind == "id" and v == "abs" and self.at("(", 1):
            self.take()
            self.take()
            e = self.expr()
            self.expect(")")
            return Abs(e)
        if kind == "id":
            return self.var()
        self.fail(f"unexpected {v or 'end of input'!r}", pos)

    def var(self) -> Var:
        _, name, pos = self.take()
        reg = None
        if self.at("*") and self.peek(1)[0] == "num":
            self.take()
            k, n, p = self.take()
            if not n.isdigit():
                self.fail("expected a register index", p)
            reg = int(n)
        if self.metric_mode:
            if self.at("'"):
                self.take()
                return Var(name, "'", reg)
            return Var(name, "", reg)
        if not self.at("["):
            self.fail(f"component {name!r} needs a trace variable, e.g. {name}[p]", pos)
        self.take()
        k, trace, p = self.take()
        if k != "id":
            self.fail("expected a trace variable", p)
        self.expect("]")
        return Var(name, trace, reg)


def _check(f: Formula, text: str, closed: bool, max_register: int | None):
    bound: list[str] = []

    def walk(g, scope):
        if isinstance(g, (Forall, Exists)):
            if g.var in bound:
                raise FormulaSyntaxError(f"duplicate quantifier variable {g.var!r}", text, 0)
            bound.append(g.var)
            walk(g.body, scope | {g.var})
            return
        if isinstance(g, Freeze) and max_register is not None and not 1 <= g.reg <= max_register:
            raise FormulaSyntaxError(f"register {g.reg} outside 1..{max_register}", text, 0)
        if isinstance(g, Atom):
            for v in (*expr_vars(g.left), *expr_vars(g.right)):
                if closed and v.trace not in scope:
                    raise FormulaSyntaxError(f"unbound trace variable {v.trace!r}", text, 0)
                if v.reg is not None and max_register is not None and not 1 <= v.reg <= max_register:
                    raise FormulaSyntaxError(f"register {v.reg} outside 1..{max_register}", text, 0)
        for c in _kids(g):
            walk(c, scope)
    walk(f, frozenset())


def _kids(g):
    from .ast import children
    return children(g)


def parse_formula(text: str, closed: bool = True, max_register: int | None = None) -> Formula:
    """Parse formula text.  ``closed`` rejects unbound trace variables."""
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail(f"unexpected {p.peek()[1]!r}")
    _check(f, text, closed, max_register)
    return f


# ---------------------------------------------------------------------------
# printing


def _num(x: Fraction) -> str:
    s = fmt_q(x)
    return f"({s})" if s.startswith("-") or "/" in s else s


def _interval(j) -> str:
    if j == UNBOUNDED:
        return ""
    a, b = j
    return f"[{fmt_q(a)},{'inf)' if b is None else fmt_q(b) + ']'}"


def print_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return _num(e.value)
    if isinstance(e, Var):
        star = f"*{e.reg}" if e.reg is not None else ""
        if e.trace in ("", "'"):
            return f"{e.name}{star}{e.trace}"
        return f"{e.name}{star}[{e.trace}]"
    if isinstance(e, Neg):
        return f"-{print_expr(e.arg)}" if isinstance(e.arg, (Num, Var, Abs)) else f"-({print_expr(e.arg)})"
    if isinstance(e, Abs):
        return f"abs({print_expr(e.arg)})"
    return f"({print_expr(e.left)} {e.op} {print_expr(e.right)})"


def print_formula(f: Formula) -> str:
    if isinstance(f, (Forall, Exists)):
        q = "forall" if isinstance(f, Forall) else "exists"
        return f"{q} {f.var}. {print_formula(f.body)}"
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Atom):
        return f"{print_expr(f.left)} {f.op} {print_expr(f.right)}"
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, TrueF):
            return "false"
        if isinstance(a, Until) and isinstance(a.left, TrueF) and isinstance(a.right, Not):
            return f"G{_interval(a.interval)} {_wrap(a.right.arg)}"
        if isinstance(a, Since) and isinstance(a.left, TrueF) and isinstance(a.right, Not):
            return f"H{_interval(a.interval)} {_wrap(a.right.arg)}"
        return f"!{_wrap(a)}"
    if isinstance(f, Until) and isinstance(f.left, TrueF):
        return f"F{_interval(f.interval)} {_wrap(f.right)}"
    if isinstance(f, Since) and isinstance(f.left, TrueF):
        return f"P{_interval(f.interval)} {_wrap(f.right)}"
    if isinstance(f, Freeze):
        return f"*{f.reg} {_wrap(f.arg)}"
    op = {Or: "||", And: "&&", Implies: "->", Until: "U", Since: "S"}[type(f)]
    if isinstance(f, (Until, Since)):
        op += _interval(f.interval)
    return f"{_wrap(f.left)} {op} {_wrap(f.right)}"


def _wrap(f: Formula) -> str:
    s = print_formula(f)
    if isinstance(f, TrueF) or (isinstance(f, Not) and isinstance(f.arg, TrueF)):
        return s
    return f"({s})"


# ---------------------------------------------------------------------------
# metric expressions


@lru_cache(maxsize=256)
def parse_metric_expr(text: str) -> Expr:
    """A term over bare component names ``x`` (first argument) and ``x'`` (second)."""
    p = _Parser(text, metric_mode=True)
    e = p.expr()
    if p.peek()[0] != "eof":
        p.fail(f"unexpected {p.peek()[1]!r}")
    return e


def substitute(e: Expr, fn: Callable[[Var], Expr]) -> Expr:
    if isinstance(e, Var):
        return fn(e)
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, fn), substitute(e.right, fn))
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, fn))
    if isinstance(e, Abs):
        return Abs(substitute(e.arg, fn))
    return e


def eval_expr(e: Expr, lookup: Callable[[Var], Fraction]) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return lookup(e)
    if isinstance(e, Neg):
        return -eval_expr(e.arg, lookup)
    if isinstance(e, Abs):
        return abs(eval_expr(e.arg, lookup))
    a, b = eval_expr(e.left, lookup), eval_expr(e.right, lookup)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    return a / b


def eval_metric_expr(expr: str, a: Sequence[Fraction], b: Sequence[Fraction],
                     names: Sequence[str] | None) -> Fraction:
    if names is None:
        names = ("x",) if len(a) == 1 else tuple(f"x{k}" for k in range(len(a)))
    idx = {n: k for k, n in enumerate(names)}
    e = parse_metric_expr(expr)

    def look(v: Var) -> Fraction:
        if v.name not in idx:
            raise ValueError(f"metric refers to unknown component {v.name!r}")
        return (b if v.trace == "'" else a)[idx[v.name]]
    return Fraction(eval_expr(e, look))


__all__ = ["FormulaSyntaxError", "parse_formula", "print_formula", "print_expr",
           "parse_metric_expr", "substitute", "eval_expr", "eval_metric_expr", "CLOCK",
           "TrueF", "And"]
