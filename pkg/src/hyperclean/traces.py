"""Generalized timed traces over exact rational time.

A :class:`Gtt` is a finite time domain with one value vector per point and an
interpolation mode.  Times and values are :class:`fractions.Fraction`
throughout so that every ``<= eps`` and ``<= tau`` comparison is exact.
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

DISCRETE = "discrete"
PIECEWISE_CONSTANT = "piecewise-constant"
PIECEWISE_LINEAR = "piecewise-linear"
INTERP_MODES = (DISCRETE, PIECEWISE_CONSTANT, PIECEWISE_LINEAR)

Vector = tuple[Fraction, ...]


class TraceError(ValueError):
    """Malformed trace data or an invalid operation on a trace."""


def q(x) -> Fraction:
    """Coerce ints, decimal strings and Fractions to an exact rational.

    Floats go through their shortest ``repr`` so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x).strip())


@dataclass(frozen=True)
class Gtt:
    times: tuple[Fraction, ...]
    values: tuple[Vector, ...]
    names: tuple[str, ...] = ("x",)
    interp: str = DISCRETE
    units: tuple[str, ...] = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.interp not in INTERP_MODES:
            raise TraceError(f"unknown interp mode {self.interp!r}")
        if len(self.times) != len(self.values):
            raise TraceError("times and values differ in length")
        for a, b in zip(self.times, self.times[1:]):
            if not a < b:
                raise TraceError(f"time domain not strictly increasing at {b}")
        if self.times and self.times[0] < 0:
            raise TraceError("negative time point")
        for v in self.values:
            if len(v) != len(self.names):
                raise TraceError("value arity does not match component names")
        if self.units and len(self.units) != len(self.names):
            raise TraceError("units must be given per component")
        object.__setattr__(self, "_index", {t: k for k, t in enumerate(self.times)})

    @classmethod
    def build(cls, times: Iterable, values: Iterable, names: Sequence[str] = ("x",),
              interp: str = DISCRETE, units: Sequence[str] = ()) -> "Gtt":
        ts = tuple(q(t) for t in times)
        vs = []
        for v in values:
            if isinstance(v, (list, tuple)):
                vs.append(tuple(q(c) for c in v))
            else:
                vs.append((q(v),))
        return cls(ts, tuple(vs), tuple(names), interp, tuple(units))

    # basic accessors
    def __len__(self) -> int:
        return len(self.times)

    @property
    def empty(self) -> bool:
        return not self.times

    @property
    def length(self) -> Fraction:
        """Time length, i.e. the largest domain point."""
        return self.times[-1] if self.times else Fraction(0)

    @property
    def start(self) -> Fraction:
        return self.times[0] if self.times else Fraction(0)

    def component(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise TraceError(f"no component {name!r} in {self.names}") from None

    def with_values(self, times, values) -> "Gtt":
        return Gtt(tuple(times), tuple(values), self.names, self.interp, self.units)

    def has_point(self, t: Fraction) -> bool:
        return t in self._index

    def defined_at(self, t: Fraction) -> bool:
        """Whether ``t`` belongs to the (interp-dependent) time domain."""
        if not self.times:
            return False
        if self.interp == DISCRETE:
            return t in self._index
        return self.times[0] <= t <= self.times[-1]

    def at(self, t: Fraction) -> Vector | None:
        return sample(self, t)

    def point_value(self, t: Fraction) -> Vector:
        return self.values[self._index[t]]

    def index_of(self, t: Fraction) -> int | None:
        return self._index.get(t)

    def window(self, lo: Fraction, hi: Fraction) -> range:
        """Indices of domain points inside ``[lo, hi]``."""
        return range(bisect_left(self.times, lo), bisect_right(self.times, hi))


def with_clock(g: Gtt, name: str = "c") -> Gtt:
    """Append a clock component whose value at each point is the time itself."""
    if name in g.names:
        raise TraceError(f"component {name!r} already present")
    vals = tuple(v + (t,) for t, v in zip(g.times, g.values))
    units = g.units + ("s",) if g.units else ()
    return Gtt(g.times, vals, g.names + (name,), g.interp, units)


def restrict_prefix(g: Gtt, t0) -> Gtt:
    t0 = q(t0)
    k = bisect_right(g.times, t0)
    return g.with_values(g.times[:k], g.values[:k])


def restrict_segment(g: Gtt, ts, te) -> Gtt:
    """Restrict to ``[ts, te]``.

    Piecewise-linear traces denote a signal on an interval, so interior
    endpoints that miss the grid are inserted as interpolated samples.
    """
    ts, te = q(ts), q(te)
    if ts > te:
        raise TraceError(f"invalid interval [{ts}, {te}]")
    idx = g.window(ts, te)
    times = list(g.times[idx.start:idx.stop])
    values = list(g.values[idx.start:idx.stop])
    if g.interp == PIECEWISE_LINEAR and g.times:
        if g.times[0] <= ts <= g.times[-1] and (not times or times[0] != ts):
            times.insert(0, ts)
            values.insert(0, sample(g, ts))
        if g.times[0] <= te <= g.times[-1] and times[-1] != te:
            times.append(te)
            values.append(sample(g, te))
    return g.with_values(times, values)


def sample(g: Gtt, t) -> Vector | None:
    """Value of ``g`` at ``t`` according to its interp mode, or ``None``."""
    t = q(t)
    k = g._index.get(t)
    if k is not None:
        return g.values[k]
    if g.interp == DISCRETE or not g.times:
        return None
    if t < g.times[0] or t > g.times[-1]:
        return None
    j = bisect_right(g.times, t) - 1
    if g.interp == PIECEWISE_CONSTANT:
        return g.values[j]
    t0, t1 = g.times[j], g.times[j + 1]
    w = (t - t0) / (t1 - t0)
    return tuple(a + (b - a) * w for a, b in zip(g.values[j], g.values[j + 1]))


def same_domain(a: Gtt, b: Gtt) -> bool:
    return a.times == b.times


# ---------------------------------------------------------------------------
# metrics


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class Metric:
    """Distance on value vectors.

    ``abs`` is the max over components of ``|a_k - b_k|`` (plain ``|a - b|``
    on scalars), ``l1`` is a weighted sum of component differences and
    ``expr`` is a symmetric expression over ``x`` and ``x'`` style names
    parsed with the formula term grammar.
    """

    kind: str = "abs"
    weights: tuple[Fraction, ...] = ()
    expr: str = ""

    def __post_init__(self):
        if self.kind not in ("abs", "l1", "expr"):
            raise MetricError(f"unknown metric kind {self.kind!r}")
        if self.kind == "expr" and not self.expr:
            raise MetricError("expr metric needs an expression")

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.weights:
            d["weights"] = [str(w) for w in self.weights]
        if self.expr:
            d["expr"] = self.expr
        return d

    @classmethod
    def from_json(cls, d) -> "Metric":
        if isinstance(d, str):
            return cls(d)
        return cls(d.get("kind", "abs"), tuple(q(w) for w in d.get("weights", ())),
                   d.get("expr", ""))


ABS = Metric("abs")


def metric_eval(d: Metric, a: Sequence[Fraction], b: Sequence[Fraction],
                names: Sequence[str] | None = None) -> Fraction:
    if len(a) != len(b):
        raise MetricError(f"arity mismatch {len(a)} vs {len(b)}")
    if d.kind == "abs":
        return max((abs(x - y) for x, y in zip(a, b)), default=Fraction(0))
    if d.kind == "l1":
        w = d.weights or (Fraction(1),) * len(a)
        if len(w) != len(a):
            raise MetricError("weight count does not match arity")
        return sum((wk * abs(x - y) for wk, x, y in zip(w, a, b)), Fraction(0))
    from .hyperstl.parser import eval_metric_expr
    return eval_metric_expr(d.expr, a, b, names)


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class SystemTrace:
    id: str
    input: Gtt
    output: Gtt
    checkpoint_output: bool = False

    def __post_init__(self):
        if not self.checkpoint_output and self.input.times != self.output.times:
            raise TraceError(f"{self.id}: input and output domains differ")

    def combined(self) -> Gtt:
        """Input and output as one multi-component trace on the shared domain."""
        if self.checkpoint_output:
            raise TraceError("checkpoint outputs cannot be combined with inputs")
        vals = tuple(a + b for a, b in zip(self.input.values, self.output.values))
        units = (self.input.units + self.output.units
                 if self.input.units and self.output.units else ())
        return Gtt(self.input.times, vals, self.input.names + self.output.names,
                   self.input.interp, units)


@dataclass(frozen=True)
class TraceSet:
    traces: tuple[SystemTrace, ...]
    input_metric: Metric = ABS
    output_metric: Metric = ABS

    def __iter__(self):
        return iter(self.traces)

    def __len__(self):
        return len(self.traces)

    def by_id(self, tid: str) -> SystemTrace:
        for s in self.traces:
            if s.id == tid:
                return s
        raise KeyError(tid)


# ---------------------------------------------------------------------------
# CSV


def read_csv(source, interp: str = DISCRETE, units: Sequence[str] = (),
             columns: Sequence[str] | None = None, time_column: str = "t") -> Gtt:
    """Read a ``t,<name>...`` CSV.  ``columns`` selects and orders components."""
    if isinstance(source, str) and "\n" not in source:
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source if isinstance(source, str) else source.read()
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise TraceError("empty CSV")
    header = [h.strip() for h in rows[0]]
    if time_column not in header:
        raise TraceError(f"missing time column {time_column!r}")
    ti = header.index(time_column)
    names = list(columns) if columns else [h for h in header if h != time_column]
    try:
        ci = [header.index(n) for n in names]
    except ValueError as e:
        raise TraceError(f"unknown column: {e}") from None
    times, values = [], []
    for lineno, r in enumerate(rows[1:], start=2):
        try:
            times.append(Fraction(r[ti].strip()))
            values.append(tuple(Fraction(r[c].strip()) for c in ci))
        except (ValueError, IndexError, ZeroDivisionError):
            raise TraceError(f"malformed CSV row {lineno}: {r}") from None
    return Gtt(tuple(times), tuple(values), tuple(names), interp, tuple(units))


def fmt_q(x: Fraction) -> str:
    """Render a rational as a finite decimal when possible, else ``p/q``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    s = f"{abs(x.numerator) * 10 ** digits // x.denominator:0{digits + 1}d}"
    s = s[:-digits] + "." + s[-digits:]
    s = s.rstrip("0").rstrip(".")
    return ("-" if x < 0 else "") + s


def write_csv(g: Gtt, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", *g.names])
    for t, v in zip(g.times, g.values):
        w.writerow([fmt_q(t), *(fmt_q(c) for c in v)])
