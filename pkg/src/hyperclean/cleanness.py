"""Cleanness of recorded systems against input/output conformance contracts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .conformance import (ConformanceSpec, PrefixConformance, candidate_distances,
                          generic_conf, min_eps)
from .retiming import (INF, Arbitrary, Explicit, Identity, MonotoneBijection, Retiming,
                       RetimingError, family_from_json, parse_tau, retime)
from .traces import ABS, Gtt, Metric, SystemTrace, TraceSet, fmt_q, q, restrict_prefix

PASS, FAIL, TRIVIAL = "pass", "fail", "trivially-passed"


class NotDeterministicError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# contracts


_ID_PAIR = Retiming((), (), "id")


@dataclass(frozen=True)
class SyncMap:
    """Maps an input retiming pair to the output retiming pairs to try.

    ``kind`` is ``identity``, ``reuse-input`` or ``constant``; a constant map
    carries its single pair.  Tabulated retimings act as the identity
    outside their table.
    """

    kind: str = "identity"
    pair: Retiming | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("identity", "reuse-input", "constant"):
            raise ConfigurationError(f"unknown sync kind {self.kind!r}")
        if self.kind == "constant" and self.pair is None:
            raise ConfigurationError("constant sync needs a retiming pair")

    def __call__(self, r: Retiming) -> tuple[Retiming, ...]:
        if self.kind == "identity":
            return (_ID_PAIR,)
        if self.kind == "reuse-input":
            if r is None:
                raise ConfigurationError("reuse-input sync without an input witness")
            return (r,)
        return (self.pair,)

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "constant":
            d.update({"label": self.label} if self.label else {"pair": self.pair.to_json()})
        return d


@dataclass(frozen=True)
class Contract:
    input_conf: ConformanceSpec
    output_conf: ConformanceSpec
    sync: SyncMap | None = None
    name: str = ""

    @property
    def input_metric(self) -> Metric:
        return self.input_conf.metric

    @property
    def output_metric(self) -> Metric:
        return self.output_conf.metric

    def to_json(self) -> dict:
        d = {"name": self.name, "input": spec_to_json(self.input_conf),
             "output": spec_to_json(self.output_conf)}
        if self.sync is not None:
            d["sync"] = self.sync.to_json()
        return d

    @classmethod
    def from_json(cls, d, resolve: Callable[[str], tuple] | None = None) -> "Contract":
        sync = None
        if "sync" in d and d["sync"] is not None:
            s = d["sync"]
            pair = None
            if s.get("kind") == "constant":
                if "pair" in s:
                    pair = Retiming.from_json(s["pair"])
                elif s.get("label") and resolve is not None:
                    pair = resolve("sync:" + s["label"])[0]
                else:
                    raise ConfigurationError("constant sync needs a pair or a resolvable label")
            sync = SyncMap(s.get("kind", "identity"), pair, s.get("label", ""))
        return cls(spec_from_json(d["input"], resolve), spec_from_json(d["output"], resolve),
                   sync, d.get("name", ""))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def spec_to_json(s: ConformanceSpec) -> dict:
    return {"family": s.family.to_json(), "tau": "inf" if s.tau is INF else fmt_q(s.tau),
            "epsilon": fmt_q(s.epsilon), "metric": s.metric.to_json()}


def spec_from_json(d, resolve=None) -> ConformanceSpec:
    return ConformanceSpec(family_from_json(d["family"], resolve), parse_tau(d.get("tau", "inf")),
                           q(d.get("epsilon", 0)), Metric.from_json(d.get("metric", "abs")))


def robust_clean(eps_i, eps_o, d_i: Metric = ABS, d_o: Metric = ABS) -> Contract:
    return Contract(ConformanceSpec(Identity(), Fraction(0), eps_i, d_i),
                    ConformanceSpec(Identity(), Fraction(0), eps_o, d_o), name="RobustClean")


def hybrid_clean(tau_i, eps_i, tau_o, eps_o, d_i: Metric = ABS, d_o: Metric = ABS) -> Contract:
    return Contract(ConformanceSpec(Arbitrary(), tau_i, eps_i, d_i),
                    ConformanceSpec(Arbitrary(), tau_o, eps_o, d_o), name="HybridClean")


def skor_clean(tau_i, eps_i, tau_o, eps_o, d_i: Metric = ABS, d_o: Metric = ABS) -> Contract:
    return Contract(ConformanceSpec(MonotoneBijection(), tau_i, eps_i, d_i),
                    ConformanceSpec(MonotoneBijection(), tau_o, eps_o, d_o), name="SkorClean")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class PairResult:
    ids: tuple[str, str]
    outcome: str
    time: Fraction | None = None
    input_residual: Fraction | None = None
    output_residual: Fraction | None = None
    note: str = ""

    def to_json(self) -> dict:
        f = lambda x: None if x is None else fmt_q(x)
        d = {"pair": list(self.ids), "outcome": self.outcome, "t": f(self.time),
             "input_residual": f(self.input_residual), "output_residual": f(self.output_residual)}
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class CleannessReport:
    pairs: tuple[PairResult, ...]
    contract: str = ""
    mode: str = "det"

    @property
    def passed(self) -> bool:
        return all(p.outcome != FAIL for p in self.pairs)

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def first_failure(self) -> PairResult | None:
        return next((p for p in self.pairs if p.outcome == FAIL), None)

    def to_json(self) -> dict:
        return {"contract": self.contract, "mode": self.mode, "verdict": self.verdict,
                "pairs": [p.to_json() for p in self.pairs]}


# ---------------------------------------------------------------------------
# obligations


def merged_grid(a: Gtt, b: Gtt) -> list[Fraction]:
    return sorted(set(a.times) | set(b.times))


class _Outputs:
    """Output obligation ``PrefConf_O(o1, o2, t)`` for one pair.

    Checkpoint outputs (one sample per accumulated checkpoint) are compared
    as whole traces restricted to checkpoints at or before ``t``.
    """

    def __init__(self, spec: ConformanceSpec, o1: Gtt, o2: Gtt, checkpoint: bool):
        self.spec, self.o1, self.o2, self.checkpoint = spec, o1, o2, checkpoint
        self._pref = None if checkpoint else PrefixConformance(spec, o1, o2)
        self._memo: dict = {}

    def holds(self, t) -> bool:
        if not self.checkpoint:
            return self._pref.holds(t)
        a, b = restrict_prefix(self.o1, t), restrict_prefix(self.o2, t)
        key = (len(a), len(b))
        r = self._memo.get(key)
        if r is None:
            r = self._memo[key] = bool(generic_conf(self.spec, a, b))
        return r


def _synced_holds(spec, o1: Gtt, o2: Gtt, r: Retiming, t, checkpoint: bool, memo: dict) -> bool:
    """``PrefConf_O(o1∘r2, o2, t) ∧ PrefConf_O(o1, o2∘r1, t)``."""
    if r is _ID_PAIR:
        # o∘id = o on its own domain; resampling onto the other grid would not be
        key = ("id",)
        if key not in memo:
            memo[key] = _Outputs(spec, o1, o2, checkpoint)
        return memo[key].holds(t)
    if checkpoint:
        a, b = restrict_prefix(o1, t), restrict_prefix(o2, t)
        key = (id(r), len(a), len(b))
        if key not in memo:
            left = generic_conf(spec, retime(o1, r.apply2, b.times), b)
            right = left and generic_conf(spec, a, retime(o2, r.apply1, a.times))
            memo[key] = bool(left) and bool(right)
        return memo[key]
    key = (id(r), None, None)
    if key not in memo:
        memo[key] = (PrefixConformance(spec, retime(o1, r.apply2, o2.times), o2),
                     PrefixConformance(spec, o1, retime(o2, r.apply1, o1.times)))
    left, right = memo[key]
    return left.holds(t) and right.holds(t)


def _input_residual(spec, i1, i2, upto) -> Fraction | None:
    grid = [t for t in merged_grid(i1, i2) if t <= upto]

    def ok(eps):
        p = PrefixConformance(spec.with_eps(eps), i1, i2)
        return all(p.holds(t) for t in grid)
    return min_eps(ok, candidate_distances(spec, i1, i2))


def _output_residual(spec, o1, o2, t, checkpoint) -> Fraction | None:
    if checkpoint:
        a, b = restrict_prefix(o1, t), restrict_prefix(o2, t)
        return min_eps(lambda e: bool(generic_conf(spec.with_eps(e), a, b)),
                       candidate_distances(spec, a, b))
    return min_eps(lambda e: PrefixConformance(spec.with_eps(e), o1, o2).holds(t),
                   candidate_distances(spec, o1, o2))


def _check_pair(contract: Contract, s1: SystemTrace, s2: SystemTrace, residuals: bool,
                obligation=None) -> PairResult:
    """Scan the merged input grid for one ordered pair.

    ``obligation(t)`` decides the output side; by default it is the plain
    output PrefConf.
    """
    ci, co = contract.input_conf, contract.output_conf
    checkpoint = s1.checkpoint_output or s2.checkpoint_output
    pin = PrefixConformance(ci, s1.input, s2.input)
    if obligation is None:
        outs = _Outputs(co, s1.output, s2.output, checkpoint)
        obligation = outs.holds
    grid = merged_grid(s1.input, s2.input)
    ids = (s1.id, s2.id)
    held = None
    for t in grid:
        try:
            ok = pin.holds(t)
        except RetimingError as e:
            # an explicit input retiming that does not cover this pair
            # cannot witness anything, so the antecedent is false
            return PairResult(ids, TRIVIAL, None, note=f"input retiming undefined: {e}")
        if not ok:
            break
        held = t
        if not obligation(t):
            res = (None, None)
            if residuals:
                res = (_input_residual(ci, s1.input, s2.input, t),
                       _output_residual(co, s1.output, s2.output, t, checkpoint))
            return PairResult(ids, FAIL, t, *res)
    last = grid[-1] if grid else Fraction(0)
    if held is None:
        ires = _input_residual(ci, s1.input, s2.input, last) if residuals and grid else None
        return PairResult(ids, TRIVIAL, None, ires, None)
    res = (None, None)
    if residuals:
        res = (_input_residual(ci, s1.input, s2.input, held),
               _output_residual(co, s1.output, s2.output, held, checkpoint))
    return PairResult(ids, PASS, None, *res)


def _ordered_pairs(items):
    items = sorted(items, key=lambda s: s.id)
    return [(a, b) for a in items for b in items if a is not b]


def _same_input(a: Gtt, b: Gtt) -> bool:
    return a.times == b.times and a.values == b.values


def is_deterministic(H: TraceSet) -> bool:
    try:
        _check_deterministic(H)
    except NotDeterministicError:
        return False
    return True


def _check_deterministic(H: TraceSet):
    seen = list(H)
    for k, a in enumerate(seen):
        for b in seen[k + 1:]:
            if _same_input(a.input, b.input) and not (
                    a.output.times == b.output.times and a.output.values == b.output.values):
                raise NotDeterministicError(
                    f"{a.id} and {b.id} share an input but differ in output; use clean_nondet")


# ---------------------------------------------------------------------------
# entry points


def clean_det(contract: Contract, H: TraceSet, residuals: bool = False) -> CleannessReport:
    _check_deterministic(H)
    pairs = tuple(_check_pair(contract, a, b, residuals) for a, b in _ordered_pairs(H))
    return CleannessReport(pairs, contract.name, "det")


def clean_nondet(contract: Contract, H: TraceSet, residuals: bool = False) -> CleannessReport:
    groups: list[list[SystemTrace]] = []
    for s in sorted(H, key=lambda s: s.id):
        for g in groups:
            if _same_input(g[0].input, s.input):
                g.append(s)
                break
        else:
            groups.append([s])
    co = contract.output_conf
    out = []
    for g1 in groups:
        for g2 in groups:
            if g1 is g2:
                continue
            cp = any(s.checkpoint_output for s in g1 + g2)
            table = {(a.id, b.id): _Outputs(co, a.output, b.output, cp) for a in g1 for b in g2}

            def obligation(t, g1=g1, g2=g2, table=table):
                fwd = all(any(table[a.id, b.id].holds(t) for b in g2) for a in g1)
                return fwd and all(any(table[a.id, b.id].holds(t) for a in g1) for b in g2)
            r = _check_pair(contract, g1[0], g2[0], False, obligation)
            ids = ("|".join(s.id for s in g1), "|".join(s.id for s in g2))
            if residuals and r.outcome != PASS:
                # only the input residual is meaningful across output sets
                upto = r.time if r.time is not None else merged_grid(g1[0].input, g2[0].input)[-1]
                r = PairResult(ids, r.outcome, r.time,
                               _input_residual(contract.input_conf, g1[0].input, g2[0].input, upto))
            else:
                r = PairResult(ids, r.outcome, r.time)
            out.append(r)
    return CleannessReport(tuple(out), contract.name, "nondet")


def clean_sync(contract: Contract, H: TraceSet, residuals: bool = False) -> CleannessReport:
    """Cleanness with synchronised retiming, searched over canonical witnesses only.

    A failing pair is therefore a failure *under canonical witnesses*; a pass
    is exact.
    """
    if contract.sync is None:
        raise ConfigurationError("contract has no sync map")
    _check_deterministic(H)
    ci, co, sync = contract.input_conf, contract.output_conf, contract.sync
    out = []
    for s1, s2 in _ordered_pairs(H):
        pin = PrefixConformance(ci, s1.input, s2.input)
        cp = s1.checkpoint_output or s2.checkpoint_output
        memo: dict = {}
        if sync.kind == "reuse-input":
            extra = list(ci.family.members) if isinstance(ci.family, Explicit) else []
            # keeps every tried retiming alive so the id-keyed memo stays valid
            seen: dict = {}

            def candidates(t, pin=pin, extra=extra, seen=seen):
                w = pin.witness(t)
                rs = ([w[1]] if w is not None else []) + extra
                return [seen.setdefault(id(r), r) for r in rs]
        else:
            def candidates(t):
                return (None,)

        def obligation(t, s1=s1, s2=s2, cp=cp, memo=memo, candidates=candidates):
            return any(_synced_holds(co, s1.output, s2.output, rs, t, cp, memo)
                       for r in candidates(t) for rs in sync(r))
        r = _check_pair(contract, s1, s2, False, obligation)
        if r.outcome == FAIL:
            ires = ores = None
            if residuals:
                ires = _input_residual(ci, s1.input, s2.input, r.time)
            r = PairResult(r.ids, FAIL, r.time, ires, ores, note="fail under canonical witnesses")
        out.append(r)
    return CleannessReport(tuple(out), contract.name, "sync")


def check_contract(contract: Contract, H: TraceSet, residuals: bool = False) -> CleannessReport:
    """Dispatch on the contract: synchronised, deterministic or nondeterministic."""
    if contract.sync is not None:
        return clean_sync(contract, H, residuals)
    if is_deterministic(H):
        return clean_det(contract, H, residuals)
    return clean_nondet(contract, H, residuals)


NAMED = {"RobustClean": (robust_clean, 2), "HybridClean": (hybrid_clean, 4),
         "SkorClean": (skor_clean, 4)}


def named_contract_check(name: str, params, H: TraceSet, residuals: bool = False) -> CleannessReport:
    try:
        build, arity = NAMED[name]
    except KeyError:
        raise ConfigurationError(f"unknown named contract {name!r}") from None
    if len(params) != arity:
        raise ConfigurationError(f"{name} takes {arity} parameters")
    c = build(*params, d_i=H.input_metric, d_o=H.output_metric)
    return check_contract(c, H, residuals)
