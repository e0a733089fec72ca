"""Manifest files: where traces come from and how inputs pair with outputs.

A manifest is a JSON object::

    {
      "input_metric": {"kind": "abs"},          # optional
      "output_metric": {"kind": "abs"},         # optional
      "traces": [
        {"id": "a_in", "role": "input", "path": "a.csv", "interp": "piecewise-linear",
         "time_column": "time", "columns": ["speed"], "units": ["km/h"]},
        {"id": "a_out", "role": "output", "pairs": "a_in", "rows": [[1180, 182]],
         "names": ["nox"], "checkpoints": true},
        {"id": "b", "role": "combined", "path": "b.csv", "inputs": ["x"], "outputs": ["y"]},
        {"id": "nedc", "role": "input", "cycle": "NEDC", "rate": 1}
      ]
    }

Each entry takes its samples from exactly one of ``path`` (CSV, relative to
the manifest), ``rows`` (inline ``[t, v...]`` lists) or ``cycle`` (a
generated nominal cycle).  ``columns`` maps arbitrary CSV headers onto the
components, so recorded data needs no fixed layout.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .traces import (ABS, DISCRETE, INTERP_MODES, Gtt, Metric, SystemTrace, TraceError, TraceSet,
                     read_csv)

ROLES = ("input", "output", "combined")


class ManifestError(ValueError):
    pass


@dataclass
class Manifest:
    traces: dict[str, Gtt]
    roles: dict[str, str]
    systems: TraceSet
    digest: str
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    entries: list = field(default_factory=list)


def _entry_trace(e: dict, base: Path, default_interp: str) -> Gtt:
    interp = e.get("interp", default_interp)
    if interp not in INTERP_MODES:
        raise ManifestError(f"{e['id']}: unknown interp {interp!r}")
    units = tuple(e.get("units", ()))
    sources = [k for k in ("path", "rows", "cycle") if k in e]
    if len(sources) != 1:
        raise ManifestError(f"{e['id']}: give exactly one of path, rows or cycle")
    if "path" in e:
        p = base / e["path"]
        try:
            return read_csv(str(p), interp, units, e.get("columns"), e.get("time_column", "t"))
        except OSError as err:
            raise ManifestError(f"{e['id']}: cannot read {p}: {err.strerror}") from None
    if "rows" in e:
        names = tuple(e.get("names", ("x",)))
        rows = e["rows"]
        if any(len(r) != len(names) + 1 for r in rows):
            raise ManifestError(f"{e['id']}: every row needs a time and {len(names)} value(s)")
        return Gtt.build([r[0] for r in rows], [tuple(r[1:]) for r in rows], names, interp, units)
    from .cycles import gen_cycle
    g = gen_cycle(e["cycle"], e.get("rate", 1))
    if "interp" in e:
        g = Gtt(g.times, g.values, g.names, interp, g.units)
    return g


def _split(g: Gtt, comps) -> Gtt:
    idx = [g.component(c) for c in comps]
    units = tuple(g.units[k] for k in idx) if g.units else ()
    return Gtt(g.times, tuple(tuple(v[k] for k in idx) for v in g.values), tuple(comps),
               g.interp, units)


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as err:
        raise ManifestError(f"cannot read manifest {path}: {err.strerror}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ManifestError(f"manifest is not valid JSON: {err}") from None
    return manifest_from_dict(doc, path.parent, raw)


def manifest_from_dict(doc: dict, base: Path = Path("."), raw: bytes | None = None) -> Manifest:
    entries = doc.get("traces")
    if not isinstance(entries, list) or not entries:
        raise ManifestError("manifest needs a non-empty 'traces' list")
    default_interp = doc.get("interp", DISCRETE)
    h = hashlib.sha256(raw if raw is not None else json.dumps(doc, sort_keys=True).encode())
    traces, roles = {}, {}
    for e in entries:
        if "id" not in e:
            raise ManifestError("every trace entry needs an id")
        tid = str(e["id"])
        if tid in traces:
            raise ManifestError(f"duplicate trace id {tid!r}")
        role = e.get("role", "input")
        if role not in ROLES:
            raise ManifestError(f"{tid}: unknown role {role!r}")
        try:
            traces[tid] = _entry_trace(e, base, default_interp)
        except TraceError as err:
            raise ManifestError(f"{tid}: {err}") from None
        roles[tid] = role
        if "path" in e:
            h.update((base / e["path"]).read_bytes())
    systems, ins, outs = [], set(), set()
    paired = set()
    for e in entries:
        tid, role = str(e["id"]), roles[str(e["id"])]
        try:
            if role == "combined":
                g = traces[tid]
                i_names, o_names = e.get("inputs"), e.get("outputs")
                if not i_names or not o_names:
                    raise ManifestError(f"{tid}: combined traces need 'inputs' and 'outputs'")
                systems.append(SystemTrace(tid, _split(g, i_names), _split(g, o_names)))
                ins |= {tuple(i_names)}
                outs |= {tuple(o_names)}
            elif role == "output":
                src = e.get("pairs")
                if src not in traces or roles[src] != "input":
                    raise ManifestError(f"{tid}: 'pairs' must name an input trace")
                if src in paired:
                    raise ManifestError(f"input {src!r} is paired with more than one output")
                paired.add(src)
                systems.append(SystemTrace(src, traces[src], traces[tid],
                                           bool(e.get("checkpoints", False))))
                ins |= {traces[src].names}
                outs |= {traces[tid].names}
        except TraceError as err:
            raise ManifestError(str(err)) from None
    if len(ins) > 1 or len(outs) > 1:
        raise ManifestError("all systems must share input and output component names")
    im = Metric.from_json(doc["input_metric"]) if "input_metric" in doc else ABS
    om = Metric.from_json(doc["output_metric"]) if "output_metric" in doc else ABS
    return Manifest(traces, roles, TraceSet(tuple(systems), im, om), h.hexdigest(),
                    next(iter(ins), ()), next(iter(outs), ()), entries)


def resolve_trace(ref: str, manifest: Manifest | None, interp: str = DISCRETE) -> Gtt:
    """A manifest id, or failing that a CSV path."""
    if manifest is not None and ref in manifest.traces:
        return manifest.traces[ref]
    p = Path(ref)
    if p.is_file():
        return read_csv(str(p), interp)
    raise ManifestError(f"no trace {ref!r} in the manifest and no such CSV file")


__all__ = ["Manifest", "ManifestError", "load_manifest", "manifest_from_dict", "resolve_trace"]
