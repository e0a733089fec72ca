"""Minimal value thresholds for hybrid conformance at a fixed time threshold."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .conformance import window_min
from .retiming import Retiming, RetimingError
from .traces import ABS, Gtt, Metric, q, sample

DEFAULT_TAUS = tuple(Fraction(t) for t in (0, 1, 2, 3, 5, 10, 15, 20))


class CoverageError(ValueError):
    def __init__(self, t):
        super().__init__(f"no point of the other trace within tau of t={t}")
        self.t = t


def local_min(t1, mu1: Gtt, mu2: Gtt, tau, d: Metric = ABS) -> Fraction | None:
    t1 = q(t1)
    if not mu1.has_point(t1):
        raise ValueError(f"{t1} is not a domain point of the first trace")
    tau = q(tau)
    m = window_min(mu2, mu1.point_value(t1), t1 - tau, t1 + tau, d)
    return None if m is None else m[0]


def global_min(mu1: Gtt, mu2: Gtt, tau, d: Metric = ABS) -> Fraction:
    if mu1.empty:
        raise ValueError("empty trace")
    tau = q(tau)
    worst = Fraction(0)
    for t, v in zip(mu1.times, mu1.values):
        m = window_min(mu2, v, t - tau, t + tau, d)
        if m is None:
            raise CoverageError(t)
        if m[0] > worst:
            worst = m[0]
    return worst


def epsilon_min(mu1: Gtt, mu2: Gtt, tau, d: Metric = ABS) -> Fraction:
    return max(global_min(mu1, mu2, tau, d), global_min(mu2, mu1, tau, d))


def _compose(mu: Gtt, r: dict, domain) -> Gtt:
    vals = []
    for t in domain:
        if t not in r:
            raise RetimingError(f"retiming undefined at {t}")
        v = sample(mu, r[t])
        if v is None:
            raise RetimingError(f"retimed point {r[t]} outside the trace domain")
        vals.append(v)
    return mu.with_values(tuple(domain), vals)


def epsilon_min_retimed(mu1: Gtt, mu2: Gtt, r: Retiming, tau, d: Metric = ABS) -> Fraction:
    """Apply the fixed retiming first, then the symmetric windowed max-min.

    ``mu1' = mu1 ∘ r2`` lives on the domain of ``mu2`` and ``mu2' = mu2 ∘ r1``
    on the domain of ``mu1``.
    """
    mu1r = _compose(mu1, r.map2, mu2.times)
    mu2r = _compose(mu2, r.map1, mu1.times)
    return max(global_min(mu1, mu2r, tau, d), global_min(mu2, mu1r, tau, d))


@dataclass(frozen=True)
class EpsilonFrontier:
    entries: tuple[tuple[Fraction, Fraction], ...]
    ids: tuple[str, str] = ("", "")
    retiming: str = ""

    def to_csv(self) -> str:
        from .traces import fmt_q
        return "tau,eps_min\n" + "".join(f"{fmt_q(t)},{fmt_q(e)}\n" for t, e in self.entries)

    def to_json(self) -> dict:
        from .traces import fmt_q
        return {"traces": list(self.ids), "retiming": self.retiming or None,
                "entries": [{"tau": fmt_q(t), "eps_min": fmt_q(e)} for t, e in self.entries]}


def tau_sweep(mu1: Gtt, mu2: Gtt, taus: Sequence = DEFAULT_TAUS, r: Retiming | None = None,
              d: Metric = ABS, ids=("", "")) -> EpsilonFrontier:
    if not taus:
        raise ValueError("empty tau list")
    out = []
    for tau in sorted(q(t) for t in taus):
        eps = (epsilon_min(mu1, mu2, tau, d) if r is None
               else epsilon_min_retimed(mu1, mu2, r, tau, d))
        out.append((tau, eps))
    for (ta, ea), (tb, eb) in zip(out, out[1:]):
        if eb > ea:
            raise AssertionError(f"eps_min increased from tau={ta} to tau={tb}")
    return EpsilonFrontier(tuple(out), tuple(ids), r.name if r is not None else "")
