"""End-to-end analysis of one nilpotent orbit."""

from __future__ import annotations

import time
from contextlib import contextmanager

from .cache import NORMALIZATION, RestrictionCache, cache_key
from .criterion import DEFAULT_SEARCH_BUDGET, DEFAULT_TRIALS, GoodnessReport, goodness_verdict
from .invariants import fundamental_invariants
from .lie import ClassicalType, build_classical
from .multipoly import format_poly
from .nilpotent import Partition, standard_triple, validate_partition
from .slodowy import restrict_all, restriction_from_kappa, slice_chart


@contextmanager
def _timed(timings: dict, name: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round(time.perf_counter() - t0, 4)


def analyze(t: ClassicalType, lam: Partition, *, seed: int = 0, trials: int = DEFAULT_TRIALS,
            search_budget: int = DEFAULT_SEARCH_BUDGET, cache: RestrictionCache | None = None,
            timings: bool = False, show_polys: bool = False):
    """Run triple -> slice -> restriction -> verdict; returns (report, chart, restrictions)."""
    validate_partition(t, lam)
    clock: dict = {}
    with _timed(clock, "triple"):
        L = build_classical(t)
        T = standard_triple(L, lam)
    with _timed(clock, "slice"):
        chart = slice_chart(L, T)
    qs = fundamental_invariants(L)
    with _timed(clock, "restriction"):
        key = cache_key(str(t), str(lam), NORMALIZATION)
        kappas = cache.load(key, chart.r) if cache is not None else None
        if kappas is not None and len(kappas) == len(qs):
            rs = [restriction_from_kappa(q, k, chart) for q, k in zip(qs, kappas)]
        else:
            rs = restrict_all(qs, chart)
            if cache is not None:
                cache.store(key, [r.kappa for r in rs])
    with _timed(clock, "criterion"):
        report: GoodnessReport = goodness_verdict(
            rs, chart, type_name=str(t), partition=str(lam), very_even=T.very_even,
            trials=trials, search_budget=search_budget, seed=seed)
    if timings:
        report.timings = clock
    if show_polys:
        report.polys = {r.label: {"kappa": format_poly(r.kappa), "initial": format_poly(r.initial)} for r in rs}
    return report, chart, rs
