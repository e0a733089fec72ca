"""Nominal driving cycles, the case-study retimings and the contract catalog."""

from __future__ import annotations

import math
from fractions import Fraction
from importlib import resources

from .cleanness import ConfigurationError, Contract, SyncMap
from .conformance import ConformanceSpec
from .data.breakpoints import DOUBLE_NEDC, NEDC, PERM_NEDC
from .retiming import (INF, Arbitrary, Explicit, Identity, Retiming, compose_families,
                       load_segments, segments_retiming)
from .traces import ABS, PIECEWISE_LINEAR, Gtt, fmt_q, q, sample

NEDC_LENGTH = Fraction(1180)
CYCLES = ("NEDC", "PermNEDC", "DoubleNEDC", "SineNEDC")
EPS_I, EPS_O = Fraction(15), Fraction(180)

_TABLES = {"NEDC": NEDC, "PermNEDC": PERM_NEDC, "DoubleNEDC": DOUBLE_NEDC}


def breakpoints(name: str) -> Gtt:
    """The breakpoint table of a cycle as a piecewise-linear speed trace."""
    try:
        tab = _TABLES[name]
    except KeyError:
        raise ValueError(f"no breakpoint table for {name!r}") from None
    return Gtt.build([t for t, _ in tab], [v for _, v in tab], ("speed",),
                     PIECEWISE_LINEAR, ("km/h",))


def _grid(length: Fraction, rate) -> list[Fraction]:
    step = 1 / q(rate)
    n = int(length / step)
    return [k * step for k in range(n + 1)]


def gen_cycle(name: str, rate=1) -> Gtt:
    rate = q(rate)
    if rate <= 0:
        raise ValueError("rate must be positive")
    if name == "SineNEDC":
        base = gen_cycle("NEDC", rate)
        # only the sine term is rounded, so the deviation from NEDC stays <= 5
        vals = [(max(Fraction(0), v[0] + Fraction(round(5 * math.sin(0.5 * float(t)), 6))),)
                for t, v in zip(base.times, base.values)]
        return base.with_values(base.times, vals)
    if name not in _TABLES:
        raise ValueError(f"unknown cycle {name!r}; expected one of {', '.join(CYCLES)}")
    bp = breakpoints(name)
    grid = _grid(bp.length, rate)
    return bp.with_values(grid, [sample(bp, t) for t in grid])


def r_d(t: Fraction) -> Fraction:
    return t % NEDC_LENGTH


def r_d_checkpoint(t: Fraction) -> Fraction:
    """``r_d`` on output checkpoints: the end of each repetition maps to 1180."""
    if t > 0 and t % NEDC_LENGTH == 0:
        return NEDC_LENGTH
    return t % NEDC_LENGTH


def rp_segments_path():
    return resources.files("hyperclean.data") / "rp_segments.csv"


def case_study_retiming(name: str, rate=1, segments=None) -> Retiming:
    """``(id, r_d)`` or ``(r_p, r_p^-1)`` tabulated on the cycle grids.

    For ``r_d`` the first map is the identity on the NEDC grid and the second
    folds the DoubleNEDC grid back onto it.
    """
    if name == "r_d":
        g1 = _grid(NEDC_LENGTH, rate)
        g2 = _grid(2 * NEDC_LENGTH, rate)
        return Retiming.of({t: t for t in g1}, {t: r_d(t) for t in g2}, "r_d")
    if name == "r_p":
        path = segments if segments is not None else rp_segments_path()
        try:
            segs = load_segments(path)
        except FileNotFoundError:
            raise ConfigurationError(f"missing r_p segment file {path}") from None
        return segments_retiming(segs, _grid(NEDC_LENGTH, rate), NEDC_LENGTH, "r_p")
    raise ValueError(f"unknown case-study retiming {name!r}")


def sync_d(checkpoints=(NEDC_LENGTH, 2 * NEDC_LENGTH)) -> Retiming:
    """``Sync_d``: the constant output pair ``(id, r_d)`` on the output checkpoints."""
    cps = [q(c) for c in checkpoints]
    return Retiming.of({c: c for c in cps if c <= NEDC_LENGTH},
                       {c: r_d_checkpoint(c) for c in cps}, "r_d")


def resolve(label: str) -> tuple[Retiming, ...]:
    """Label lookup used when reading catalog contracts back from JSON."""
    if label == "sync:Sync_d":
        return (sync_d(),)
    if label in ("r_d", "r_p"):
        return (case_study_retiming(label),)
    raise ConfigurationError(f"unknown retiming label {label!r}")


def _out() -> ConformanceSpec:
    return ConformanceSpec(Identity(), Fraction(0), EPS_O, ABS)


CATALOG = ("C", "C_a", "C_p", "C_d", "C(tau,eps)", "C_p(tau,eps)", "C_d(tau,eps)")


def contract_catalog(name: str, params=None) -> Contract:
    """The seven presets; parametrised names take ``(tau_I, eps_I)``."""
    plain = name in ("C", "C_a", "C_p", "C_d")
    base = name.split("(")[0]
    if not plain:
        if base not in ("C", "C_p", "C_d"):
            raise ConfigurationError(f"unknown contract {name!r}")
        if params is None or len(params) != 2:
            raise ConfigurationError(f"{name} needs parameters (tau_I, eps_I)")
        tau, eps = (q(p) for p in params)
    sync = None
    if name == "C":
        fam, t_in, eps = Identity(), Fraction(0), EPS_I
    elif name == "C_a":
        fam, t_in, eps = Arbitrary(), INF, EPS_I
    elif name == "C_p":
        fam, t_in, eps = Explicit((case_study_retiming("r_p"),), "r_p"), INF, EPS_I
    elif name == "C_d":
        fam, t_in, eps = Explicit((case_study_retiming("r_d"),), "r_d"), INF, EPS_I
        sync = SyncMap("constant", sync_d(), "Sync_d")
    elif base == "C":
        fam, t_in = Arbitrary(), tau
    elif base == "C_p":
        fam, t_in = compose_families(Arbitrary(), tau, Explicit((case_study_retiming("r_p"),), "r_p"),
                                     INF), INF
    else:
        fam, t_in = compose_families(Arbitrary(), tau, Explicit((case_study_retiming("r_d"),), "r_d"),
                                     INF), INF
        sync = SyncMap("constant", sync_d(), "Sync_d")
    label = name if plain else f"{base}({fmt_q(tau)},{fmt_q(eps)})"
    return Contract(ConformanceSpec(fam, t_in, eps, ABS), _out(), sync, label)

