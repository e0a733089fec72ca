"""Tabulated retimings and retiming families."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, ClassVar, Iterable, Mapping

from .traces import Gtt, q, sample

INF = None  # unbounded tau


class RetimingError(ValueError):
    pass


def _freeze(m: Mapping) -> tuple:
    return tuple(sorted((q(k), q(v)) for k, v in m.items()))


@dataclass(frozen=True)
class Retiming:
    """A pair of tabulated time maps ``r1: T1 -> T2`` and ``r2: T2 -> T1``."""

    r1: tuple[tuple[Fraction, Fraction], ...]
    r2: tuple[tuple[Fraction, Fraction], ...]
    name: str = ""
    _m1: dict = field(default=None, compare=False, repr=False, hash=False)
    _m2: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_m1", dict(self.r1))
        object.__setattr__(self, "_m2", dict(self.r2))

    @classmethod
    def of(cls, r1: Mapping, r2: Mapping, name: str = "") -> "Retiming":
        return cls(_freeze(r1), _freeze(r2), name)

    @classmethod
    def from_functions(cls, t1: Iterable, f1: Callable, t2: Iterable, f2: Callable,
                       name: str = "") -> "Retiming":
        return cls.of({t: f1(t) for t in t1}, {t: f2(t) for t in t2}, name)

    @classmethod
    def identity(cls, t1: Iterable, t2: Iterable | None = None) -> "Retiming":
        t1 = list(t1)
        t2 = t1 if t2 is None else list(t2)
        return cls.of({t: t for t in t1}, {t: t for t in t2}, "id")

    @property
    def map1(self) -> dict:
        return self._m1

    @property
    def map2(self) -> dict:
        return self._m2

    def swap(self) -> "Retiming":
        return Retiming(self.r2, self.r1, self.name)

    def restrict(self, t1: Iterable, t2: Iterable) -> "Retiming":
        """Restrict to the given source points; missing points raise."""
        try:
            return Retiming.of({t: self._m1[t] for t in t1},
                               {t: self._m2[t] for t in t2}, self.name)
        except KeyError as e:
            raise RetimingError(f"retiming undefined at {e.args[0]}") from None

    def apply1(self, t: Fraction) -> Fraction:
        """``r1`` extended by identity outside its table."""
        return self._m1.get(t, t)

    def apply2(self, t: Fraction) -> Fraction:
        return self._m2.get(t, t)

    def to_json(self) -> dict:
        from .traces import fmt_q
        return {"name": self.name,
                "r1": [[fmt_q(a), fmt_q(b)] for a, b in self.r1],
                "r2": [[fmt_q(a), fmt_q(b)] for a, b in self.r2]}

    @classmethod
    def from_json(cls, d) -> "Retiming":
        return cls.of({a: b for a, b in d["r1"]}, {a: b for a, b in d["r2"]}, d.get("name", ""))


def within_tau(r: Retiming, tau) -> bool:
    if tau is INF:
        return True
    tau = q(tau)
    return all(abs(b - a) <= tau for a, b in r.r1 + r.r2)


def retime(g: Gtt, mapping: Callable[[Fraction], Fraction], domain: Iterable) -> Gtt:
    """``g ∘ mapping`` sampled on ``domain``; points where ``g`` is undefined are dropped."""
    times, values = [], []
    for t in domain:
        v = sample(g, mapping(t))
        if v is not None:
            times.append(t)
            values.append(v)
    return g.with_values(times, values)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Family:
    kind: ClassVar[str] = ""

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Identity(Family):
    kind: ClassVar[str] = "identity"


@dataclass(frozen=True)
class Arbitrary(Family):
    kind: ClassVar[str] = "arbitrary"


@dataclass(frozen=True)
class MonotoneBijection(Family):
    kind: ClassVar[str] = "monotone"


@dataclass(frozen=True)
class Shift(Family):
    c: Fraction = Fraction(0)
    kind: ClassVar[str] = "shift"

    def to_json(self) -> dict:
        from .traces import fmt_q
        return {"kind": self.kind, "c": fmt_q(self.c)}


@dataclass(frozen=True)
class Explicit(Family):
    members: tuple[Retiming, ...] = ()
    label: str = ""
    kind: ClassVar[str] = "explicit"

    def to_json(self) -> dict:
        if self.label:
            return {"kind": self.kind, "label": self.label}
        return {"kind": self.kind, "members": [m.to_json() for m in self.members]}


@dataclass(frozen=True)
class Composition(Family):
    outer: Family = Arbitrary()
    tau_outer: Fraction | None = None
    inner: Family = Identity()
    tau_inner: Fraction | None = None
    kind: ClassVar[str] = "composition"

    def to_json(self) -> dict:
        from .traces import fmt_q
        enc = lambda x: "inf" if x is None else fmt_q(x)
        return {"kind": self.kind, "outer": self.outer.to_json(), "tau_outer": enc(self.tau_outer),
                "inner": self.inner.to_json(), "tau_inner": enc(self.tau_inner)}


def compose_families(outer: Family, tau_outer, inner: Family, tau_inner) -> Composition:
    """Component-wise composition; the inner retiming is applied first."""
    norm = lambda x: None if x is None else q(x)
    return Composition(outer=outer, tau_outer=norm(tau_outer), inner=inner,
                       tau_inner=norm(tau_inner))


def parse_tau(x):
    """``"inf"``/``None`` mean unbounded; anything else is a rational."""
    if x is None or (isinstance(x, str) and x.strip().lower() in ("inf", "infinity")):
        return INF
    return q(x)


def family_from_json(d, resolve: Callable[[str], tuple] | None = None) -> Family:
    """Inverse of ``Family.to_json``.

    Labelled explicit families are looked up through ``resolve(label)``,
    which returns the member retimings.
    """
    if isinstance(d, str):
        d = {"kind": d}
    kind = d.get("kind")
    if kind == "identity":
        return Identity()
    if kind == "arbitrary":
        return Arbitrary()
    if kind == "monotone":
        return MonotoneBijection()
    if kind == "shift":
        return Shift(q(d.get("c", 0)))
    if kind == "explicit":
        if "members" in d:
            return Explicit(tuple(Retiming.from_json(m) for m in d["members"]), d.get("label", ""))
        label = d.get("label")
        if not label or resolve is None:
            raise RetimingError("explicit family needs members or a resolvable label")
        return Explicit(tuple(resolve(label)), label)
    if kind == "composition":
        return compose_families(family_from_json(d["outer"], resolve), parse_tau(d.get("tau_outer")),
                                family_from_json(d["inner"], resolve), parse_tau(d.get("tau_inner")))
    raise RetimingError(f"unknown family kind {kind!r}")


def _strictly_increasing(pairs) -> bool:
    return all(a[1] < b[1] for a, b in zip(pairs, pairs[1:]))


def family_member(r: Retiming, fam: Family, tau=INF) -> bool:
    if not within_tau(r, tau) and not isinstance(fam, Composition):
        return False
    if isinstance(fam, Identity):
        return all(a == b for a, b in r.r1 + r.r2)
    if isinstance(fam, Arbitrary):
        return True
    if isinstance(fam, MonotoneBijection):
        if not (_strictly_increasing(r.r1) and _strictly_increasing(r.r2)):
            return False
        return all(r.map2.get(b) == a for a, b in r.r1) and all(
            r.map1.get(b) == a for a, b in r.r2)
    if isinstance(fam, Shift):
        return all(b == a + fam.c for a, b in r.r1) and all(b == a - fam.c for a, b in r.r2)
    if isinstance(fam, Explicit):
        for m in fam.members:
            if m.r1 == r.r1 and m.r2 == r.r2:
                return True
            # members may be tabulated on a superset of r's domain
            if all(m.map1.get(a) == b for a, b in r.r1) and all(
                    m.map2.get(a) == b for a, b in r.r2):
                return True
        return False
    if isinstance(fam, Composition):
        return _composition_member(r, fam)
    raise RetimingError(f"unknown family {fam!r}")


def _composition_member(r: Retiming, fam: Composition) -> bool:
    # Decomposition is searched through the inner members, which is finite
    # for every inner family we support (Explicit or Identity).
    if isinstance(fam.inner, Explicit):
        inners = fam.inner.members
    elif isinstance(fam.inner, Identity):
        inners = (Retiming.identity([a for a, _ in r.r1], [a for a, _ in r.r2]),)
    else:
        raise RetimingError("composition membership needs an explicit or identity inner family")
    for inner in inners:
        if not within_tau(inner, fam.tau_inner):
            continue
        try:
            o1 = {inner.map1[a]: b for a, b in r.r1}
            o2 = {inner.map2[a]: b for a, b in r.r2}
        except KeyError:
            continue
        # the outer map must be a function on the intermediate points
        if len(o1) != len({inner.map1[a] for a, _ in r.r1}):
            continue
        consistent = all(o1[inner.map1[a]] == b for a, b in r.r1) and all(
            o2[inner.map2[a]] == b for a, b in r.r2)
        if consistent and family_member(Retiming.of(o1, o2), fam.outer, fam.tau_outer):
            return True
    return False


# ---------------------------------------------------------------------------
# segment-permutation files


def load_segments(path) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Read ``source_start,source_end,target_start`` rows (``#`` comments allowed)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.reader(line for line in fh if not line.lstrip().startswith("#")):
            if not row or row[0].strip() == "source_start":
                continue
            out.append(tuple(q(c) for c in row[:3]))
    return out


def segments_retiming(segments, domain: Iterable, total: Fraction, name: str = "") -> Retiming:
    """Tabulate a segment permutation and its inverse on ``domain``.

    Segments are half-open ``[start, end)`` except the one ending at ``total``.
    The forward map is ``r1`` and the inverse is ``r2``.
    """
    segs = sorted(segments)
    pos = Fraction(0)
    for s, e, _ in segs:
        if s != pos or e <= s:
            raise RetimingError(f"segments do not tile [0, {total}] at {s}")
        pos = e
    if pos != total:
        raise RetimingError(f"segments end at {pos}, expected {total}")
    targets = sorted((ts, ts + (e - s)) for s, e, ts in segs)
    pos = Fraction(0)
    for a, b in targets:
        if a != pos:
            raise RetimingError(f"segment targets do not tile [0, {total}] at {a}")
        pos = b

    def fwd(t):
        for s, e, ts in segs:
            if s <= t < e or (t == e == total):
                return ts + (t - s)
        raise RetimingError(f"{t} outside [0, {total}]")

    def inv(t):
        for s, e, ts in segs:
            te = ts + (e - s)
            if ts <= t < te or t == te == total:
                return s + (t - ts)
        raise RetimingError(f"{t} outside [0, {total}]")

    dom = [q(t) for t in domain]
    return Retiming.of({t: fwd(t) for t in dom}, {t: inv(t) for t in dom}, name)
