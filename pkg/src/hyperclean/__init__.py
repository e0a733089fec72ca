"""Conformance relations, cleanness checks and HyperSTL* monitoring for timed traces."""

from .traces import (ABS, DISCRETE, PIECEWISE_CONSTANT, PIECEWISE_LINEAR, Gtt, Metric,
                     SystemTrace, TraceSet, read_csv, write_csv)
from .retiming import (Arbitrary, Composition, Explicit, Identity, MonotoneBijection, Retiming,
                       Shift)
from .conformance import (ConformanceSpec, Verdict, generic_conf, hybrid_conf, pref_conf,
                          pref_wit, skor_conf, trace_conf)

__all__ = [
    "ABS", "DISCRETE", "PIECEWISE_CONSTANT", "PIECEWISE_LINEAR", "Gtt", "Metric", "SystemTrace",
    "TraceSet", "read_csv", "write_csv", "Arbitrary", "Composition", "Explicit", "Identity",
    "MonotoneBijection", "Retiming", "Shift", "ConformanceSpec", "Verdict", "generic_conf",
    "hybrid_conf", "pref_conf", "pref_wit", "skor_conf", "trace_conf",
]
