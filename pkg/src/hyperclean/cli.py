"""Command-line front end.

Every subcommand builds a JSON report and exits with 0 when the checked
property holds (or the command simply succeeded), 1 when it is violated
and 2 on usage or data errors.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .cleanness import (ConfigurationError, Contract, NAMED, NotDeterministicError,
                        check_contract, clean_det, clean_nondet, clean_sync)
from .conformance import (CapabilityError, hybrid_conf, skor_conf, skor_min_eps, trace_conf)
from .cycles import CATALOG, CYCLES, case_study_retiming, contract_catalog, gen_cycle, resolve
from .epsmin import DEFAULT_TAUS, CoverageError, tau_sweep
from .manifest import Manifest, ManifestError, load_manifest, resolve_trace
from .retiming import Retiming, RetimingError
from .traces import (DISCRETE, INTERP_MODES, Metric, MetricError, TraceError, TraceSet, fmt_q, q,
                     restrict_prefix, restrict_segment, write_csv)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("artifact")
    except Exception:
        return "0.1.0"


def _fq(x):
    return None if x is None else fmt_q(x)


def _json_safe(x):
    if isinstance(x, Fraction):
        return fmt_q(x)
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def _parse_q(text: str) -> Fraction:
    try:
        return q(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _parse_qlist(text: str) -> list[Fraction]:
    return [_parse_q(x) for x in text.split(",") if x.strip()]


def _metric(text: str | None) -> Metric:
    if not text:
        return Metric("abs")
    if text.lstrip().startswith("{"):
        return Metric.from_json(json.loads(text))
    return Metric(text)


def _manifest(args) -> Manifest | None:
    return load_manifest(args.manifest) if args.manifest else None


def _need_manifest(args) -> Manifest:
    m = _manifest(args)
    if m is None:
        raise UsageError("this command needs --manifest")
    if not m.systems.traces:
        raise UsageError("the manifest pairs no inputs with outputs")
    return m


def _digest(args, m: Manifest | None, extra_files=()) -> str:
    h = hashlib.sha256()
    if m is not None:
        h.update(m.digest.encode())
    for f in extra_files:
        p = Path(f)
        if p.is_file():
            h.update(p.read_bytes())
    return h.hexdigest()


def _plot(path: str, series, xlabel: str, ylabel: str, title: str):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise UsageError("--plot needs matplotlib; install the 'plot' extra") from None
    fig, ax = plt.subplots(figsize=(8, 3.5))
    for label, xs, ys in series:
        ax.plot([float(x) for x in xs], [float(y) for y in ys], label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# ---------------------------------------------------------------------------
# subcommands; each returns (exit status, result dict, digest)


def cmd_ingest(args):
    m = _manifest(args)
    if m is None:
        raise UsageError("ingest needs --manifest")
    traces = []
    for tid, g in m.traces.items():
        traces.append({"id": tid, "role": m.roles[tid], "points": len(g), "interp": g.interp,
                       "components": list(g.names), "units": list(g.units),
                       "start": _fq(g.start), "length": _fq(g.length)})
        if args.out_dir:
            out = Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            with open(out / f"{tid}.csv", "w", newline="") as fh:
                write_csv(g, fh)
    systems = [{"id": s.id, "input_points": len(s.input), "output_points": len(s.output),
                "checkpoints": s.checkpoint_output} for s in m.systems]
    return EXIT_OK, {"traces": traces, "systems": systems,
                     "input_components": list(m.inputs),
                     "output_components": list(m.outputs)}, m.digest


def cmd_conf(args):
    m = _manifest(args)
    a = resolve_trace(args.a, m, args.interp)
    b = resolve_trace(args.b, m, args.interp)
    if a.names != b.names:
        raise UsageError(f"component mismatch: {list(a.names)} vs {list(b.names)}")
    if a.units and b.units and a.units != b.units:
        raise UsageError(f"unit mismatch: {list(a.units)} vs {list(b.units)}")
    d = _metric(args.metric)
    rel, eps = args.relation, args.eps
    tau = args.tau if args.tau is not None else Fraction(0)
    if rel == "trace":
        v = trace_conf(eps, d, a, b)
    elif rel == "hybrid":
        v = hybrid_conf(tau, eps, d, a, b)
    else:
        v = skor_conf(tau, eps, d, a, b)
    res = {"relation": rel, "tau": _fq(tau) if rel != "trace" else None, "eps": _fq(eps),
           "traces": [args.a, args.b], "verdict": v.outcome,
           "counterexample": _json_safe(v.counterexample)}
    if rel == "skor" and not v.holds:
        res["min_eps"] = _fq(skor_min_eps(tau, d, a, b))
    if rel == "hybrid" and not v.holds:
        from .epsmin import epsilon_min
        try:
            res["min_eps"] = _fq(epsilon_min(a, b, tau, d))
        except CoverageError as err:
            res["min_eps"] = None
            res["uncovered"] = _fq(err.t)
    return (EXIT_OK if v.holds else EXIT_FAIL), res, _digest(args, m, (args.a, args.b))


def _contract(args) -> Contract:
    if args.contract:
        try:
            doc = json.loads(Path(args.contract).read_text())
        except OSError as err:
            raise UsageError(f"cannot read contract {args.contract}: {err.strerror}") from None
        except json.JSONDecodeError as err:
            raise UsageError(f"contract is not valid JSON: {err}") from None
        try:
            return Contract.from_json(doc, resolve)
        except (KeyError, TypeError, ValueError) as err:
            raise UsageError(f"malformed contract: {err}") from None
    if not args.preset:
        raise UsageError("clean needs --contract FILE or --preset NAME")
    params = args.params or []
    if args.preset in NAMED:
        build, arity = NAMED[args.preset]
        if len(params) != arity:
            raise UsageError(f"{args.preset} takes {arity} parameters")
        return build(*params)
    if args.preset in ("C", "C_p", "C_d") and params:
        return contract_catalog(f"{args.preset}(tau,eps)", params)
    if args.preset in CATALOG:
        return contract_catalog(args.preset, params or None)
    raise UsageError(f"unknown preset {args.preset!r}; expected one of "
                     f"{', '.join([*NAMED, *CATALOG])}")


def cmd_clean(args):
    m = _need_manifest(args)
    contract = _contract(args)
    H = TraceSet(m.systems.traces, contract.input_metric, contract.output_metric)
    run = {"auto": check_contract, "det": clean_det, "nondet": clean_nondet,
           "sync": clean_sync}[args.mode]
    rep = run(contract, H, residuals=args.residuals)
    res = rep.to_json()
    res["contract_spec"] = contract.to_json()
    return (EXIT_OK if rep.passed else EXIT_FAIL), res, _digest(args, m, (args.contract or "",))


def _retiming(name: str | None) -> Retiming | None:
    if not name:
        return None
    if name in ("r_d", "r_p"):
        return case_study_retiming(name)
    try:
        return Retiming.from_json(json.loads(Path(name).read_text()))
    except OSError as err:
        raise UsageError(f"cannot read retiming {name}: {err.strerror}") from None


def cmd_epsmin(args):
    m = _manifest(args)
    a = resolve_trace(args.a, m, args.interp)
    b = resolve_trace(args.b, m, args.interp)
    r = _retiming(args.retiming)
    taus = args.taus if args.taus else list(DEFAULT_TAUS)
    try:
        fr = tau_sweep(a, b, taus, r, _metric(args.metric), (args.a, args.b))
    except CoverageError as err:
        raise UsageError(f"partial coverage: no point within tau of t={fmt_q(err.t)}") from None
    csv_text = fr.to_csv()
    if args.csv:
        Path(args.csv).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        _plot(args.plot, [("eps_min", [t for t, _ in fr.entries], [e for _, e in fr.entries])],
              "tau", "eps_min", f"{args.a} vs {args.b}")
    return EXIT_OK, fr.to_json(), _digest(args, m, (args.a, args.b, args.retiming or ""))


def _trim(m: Manifest) -> tuple[dict, Fraction]:
    gs = {}
    for s in m.systems:
        if s.checkpoint_output:
            raise UsageError(f"{s.id}: monitoring needs outputs on the input grid")
        gs[s.id] = s.combined()
    if not gs:
        # no pairings: monitor the raw traces on their own domains
        gs = dict(m.traces)
        return gs, max(g.length for g in gs.values())
    bound = min(g.length for g in gs.values())
    out = {}
    for tid, g in gs.items():
        out[tid] = (restrict_prefix(g, bound) if g.interp == DISCRETE
                    else restrict_segment(g, g.start, bound))
    return out, bound


def _formula(args, m: Manifest):
    from .hyperstl import builders, parse_formula
    if args.formula:
        text = Path(args.formula).read_text()
        return parse_formula(text, max_register=args.registers)
    if args.formula_text:
        return parse_formula(args.formula_text, max_register=args.registers)
    if not args.preset:
        raise UsageError("monitor needs --formula FILE, --formula-text or --preset")
    ins, outs = list(m.inputs), list(m.outputs)
    dI, dO = m.systems.input_metric, m.systems.output_metric

    def need(*names):
        vals = [getattr(args, n) for n in names]
        if any(v is None for v in vals):
            raise UsageError(f"preset {args.preset} needs --{' --'.join(names)}")
        return vals
    if args.preset == "hybrid-clean":
        tI, eI, tO, eO = need("tauI", "epsI", "tauO", "epsO")
        return builders.hybrid_clean_formula(tI, eI, tO, eO, ins, outs, dI, dO,
                                             variant=args.variant)
    if args.preset == "robust-clean":
        eI, eO = need("epsI", "epsO")
        return builders.robust_clean_formula(eI, eO, ins, outs, dI, dO)
    raise UsageError(f"unknown formula preset {args.preset!r}")


def cmd_monitor(args):
    from .hyperstl import Evaluator, Forall, Truth, print_formula
    m = _manifest(args)
    if m is None:
        raise UsageError("monitor needs --manifest")
    phi = _formula(args, m)
    traces, bound = _trim(m)
    ev = Evaluator(traces)
    if ev.info(phi).free_vars:
        raise UsageError(f"formula is not closed: {sorted(ev.info(phi).free_vars)}")
    v = ev.value(phi, {}, {}, Fraction(0))
    res = {"formula": print_formula(phi), "bound": fmt_q(bound), "verdict": str(v),
           "traces": list(traces)}
    prefix, body = [], phi
    while isinstance(body, Forall):
        prefix.append(body.var)
        body = body.body
    if prefix:
        import itertools
        undefined, witness = [], None
        for combo in itertools.product(ev.order, repeat=len(prefix)):
            bv = ev.value(body, dict(zip(prefix, combo)), {}, Fraction(0))
            if bv is Truth.F and witness is None:
                witness = list(combo)
            if bv is Truth.U:
                undefined.append(list(combo))
        res["witness"] = witness
        if undefined:
            res["undefined"] = undefined
            res["diagnostic"] = ("the quantifier-free body is undefined for some tuples; "
                                 "traces may be too short for the formula's intervals")
    if not ev.exact:
        res["note"] = ("breakpoints under a freeze over a piecewise-linear signal "
                       "were over-approximated")
    return (EXIT_OK if v is Truth.T else EXIT_FAIL), res, m.digest


def cmd_cycle(args):
    if args.name not in CYCLES:
        raise UsageError(f"unknown cycle {args.name!r}; expected one of {', '.join(CYCLES)}")
    g = gen_cycle(args.name, args.rate)
    buf = io.StringIO()
    write_csv(g, buf)
    if args.out and args.out != "-":
        try:
            Path(args.out).write_text(buf.getvalue())
        except OSError as err:
            raise UsageError(f"cannot write {args.out}: {err.strerror}") from None
    else:
        sys.stdout.write(buf.getvalue())
    vals = [v[0] for v in g.values]
    res = {"cycle": args.name, "rate": fmt_q(q(args.rate)), "rows": len(g),
           "length": fmt_q(g.length), "max": fmt_q(max(vals))}
    series = [(args.name, g.times, vals)]
    if args.name == "SineNEDC":
        base = gen_cycle("NEDC", args.rate)
        res["max_deviation_from_NEDC"] = fmt_q(max(abs(a[0] - b[0])
                                                  for a, b in zip(g.values, base.values)))
        series.insert(0, ("NEDC", base.times, [v[0] for v in base.values]))
    if args.plot:
        _plot(args.plot, series, "time [s]", "speed [km/h]", args.name)
    return EXIT_OK, res, hashlib.sha256(buf.getvalue().encode()).hexdigest()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def globals_(defaults: bool):
        # subcommands repeat the global flags without defaults so that a flag
        # given before the subcommand is not overwritten
        g = argparse.ArgumentParser(add_help=False)
        kw = {} if defaults else {"default": argparse.SUPPRESS}
        g.add_argument("--manifest", help="JSON manifest describing the traces", **kw)
        g.add_argument("--report", help="write the JSON report here instead of stdout", **kw)
        g.add_argument("--no-timing", action="store_true",
                       help="omit wall-clock time so reports are byte-identical", **kw)
        return g
    common = globals_(False)
    p = argparse.ArgumentParser(prog="hyperclean", parents=[globals_(True)],
                                description="Conformance, cleanness and HyperSTL* monitoring "
                                            "for timed traces.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="load and validate a manifest")
    s.add_argument("--out-dir", help="also write each trace as a normalised CSV")
    s.set_defaults(func=cmd_ingest)

    def pair(sp):
        sp.add_argument("a", help="manifest id or CSV path")
        sp.add_argument("b", help="manifest id or CSV path")
        sp.add_argument("--interp", choices=INTERP_MODES, default=DISCRETE,
                        help="interpretation of CSV paths")
        sp.add_argument("--metric", help="abs, l1 or a JSON metric object")

    s = sub.add_parser("conf", parents=[common], help="check a conformance relation")
    s.add_argument("--relation", choices=("trace", "hybrid", "skor"), required=True)
    s.add_argument("--tau", type=_parse_q)
    s.add_argument("--eps", type=_parse_q, required=True)
    pair(s)
    s.set_defaults(func=cmd_conf)

    s = sub.add_parser("clean", parents=[common], help="check a cleanness contract")
    s.add_argument("--contract", help="contract JSON file")
    s.add_argument("--preset", help="named contract, e.g. C_a or HybridClean")
    s.add_argument("--params", type=_parse_qlist, help="comma-separated preset parameters")
    s.add_argument("--mode", choices=("auto", "det", "nondet", "sync"), default="auto")
    s.add_argument("--residuals", action="store_true",
                   help="report minimal thresholds for non-passing pairs (slow)")
    s.set_defaults(func=cmd_clean)

    s = sub.add_parser("epsmin", parents=[common], help="minimal value threshold per tau")
    s.add_argument("--taus", type=_parse_qlist, help="comma-separated taus")
    s.add_argument("--retiming", help="r_d, r_p or a retiming JSON file")
    s.add_argument("--csv", help="write the frontier CSV here instead of stdout")
    s.add_argument("--plot", help="also render the frontier to this image (needs matplotlib)")
    pair(s)
    s.set_defaults(func=cmd_epsmin)

    s = sub.add_parser("monitor", parents=[common], help="evaluate a closed HyperSTL* formula")
    s.add_argument("--formula", help="formula text file")
    s.add_argument("--formula-text", help="formula given inline")
    s.add_argument("--preset", choices=("hybrid-clean", "robust-clean"))
    s.add_argument("--variant", choices=("verbatim", "general"), default="verbatim",
                   help="endpoint orders used by the hybrid-clean preset")
    for n in ("tauI", "epsI", "tauO", "epsO"):
        s.add_argument(f"--{n}", type=_parse_q)
    s.add_argument("--registers", type=int, help="highest register index allowed")
    s.set_defaults(func=cmd_monitor)

    s = sub.add_parser("cycle", parents=[common], help="generate a nominal driving cycle")
    s.add_argument("name", help=", ".join(CYCLES))
    s.add_argument("--rate", type=_parse_q, default=Fraction(1), help="samples per second")
    s.add_argument("--out", help="CSV output path ('-' for stdout)")
    s.add_argument("--plot", help="also render the cycle to this image (needs matplotlib)")
    s.set_defaults(func=cmd_cycle)
    return p


def _emit(report: dict, args, to_stderr: bool):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    elif to_stderr:
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_OK
    start = time.perf_counter()
    echo = ["hyperclean", *(argv if argv is not None else sys.argv[1:])]
    try:
        status, result, digest = args.func(args)
    except (UsageError, ManifestError, ConfigurationError, NotDeterministicError, TraceError,
            MetricError, RetimingError, CapabilityError, ValueError) as err:
        report = {"command": echo, "error": str(err), "status": EXIT_ERROR}
        sys.stderr.write(f"error: {err}\n")
        if args.report:
            _emit(report, args, True)
        return EXIT_ERROR
    report = {"command": echo, "tool": "hyperclean", "version": _version(),
              "inputs_digest": digest, "status": status, "result": result}
    if not args.no_timing:
        report["elapsed_s"] = round(time.perf_counter() - start, 3)
    csv_on_stdout = ((args.command == "cycle" and (not args.out or args.out == "-"))
                     or (args.command == "epsmin" and not args.csv))
    _emit(report, args, csv_on_stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
