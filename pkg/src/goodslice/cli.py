"""Command line interface: ``goodslice {check,scan,orbit-list,explain}``."""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import budget
from .cache import RestrictionCache
from .criterion import DEFAULT_SEARCH_BUDGET, DEFAULT_TRIALS, GOOD, LIKELY_NOT_GOOD, NOT_CERTIFIED
from .lie import ClassicalType, ConfigurationError
from .nilpotent import Partition, PartitionError, enumerate_partitions, validate_partition
from .pipeline import analyze
from .report import report_to_dict, serialize, table, to_json

EXIT_GOOD = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_LIKELY_NOT_GOOD = 10
EXIT_NOT_CERTIFIED = 11


class InputError(ValueError):
    pass


def _type(args) -> ClassicalType:
    try:
        return ClassicalType(args.type.upper(), args.rank)
    except ConfigurationError as exc:
        raise InputError(str(exc)) from None


def _partition(args, t: ClassicalType) -> Partition:
    if not args.partition:
        raise InputError("--partition is required")
    try:
        return validate_partition(t, Partition.parse(args.partition))
    except PartitionError as exc:
        raise InputError(f"invalid partition {args.partition} for {t}: {exc}") from None


def _cache(args) -> RestrictionCache | None:
    return None if args.no_cache else RestrictionCache(args.cache_dir)


def _run(args, t: ClassicalType, lam: Partition):
    with budget.deadline(args.time_budget):
        report, _, _ = analyze(t, lam, seed=args.seed, trials=args.trials, search_budget=args.search_budget,
                               cache=_cache(args), timings=args.timings, show_polys=args.show_polys)
    return report


def cmd_check(args) -> int:
    t = _type(args)
    lam = _partition(args, t)
    report = _run(args, t, lam)
    sys.stdout.write(serialize(report, args.output))
    return report.exit_code


def _scan_one(payload):
    args, t, lam = payload
    try:
        report = _run(args, t, lam)
    except budget.BudgetExceeded:
        return {"partition": str(lam), "status": "skipped", "message": "time budget exhausted"}
    except Exception as exc:  # recorded per orbit, not fatal
        return {"partition": str(lam), "status": "error", "message": f"{type(exc).__name__}: {exc}"}
    return {"partition": str(lam), "status": "ok", "report": report_to_dict(report)}


def _verdict_class(row: dict) -> str:
    if row["status"] != "ok":
        return row["status"]
    v = row["report"]["verdict"]
    return LIKELY_NOT_GOOD if v.startswith(LIKELY_NOT_GOOD) else v


def cmd_scan(args) -> int:
    t = _type(args)
    payloads = [(args, t, lam) for lam in enumerate_partitions(t)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_one, payloads))
    else:
        rows = [_scan_one(p) for p in payloads]
    counts = Counter(_verdict_class(r) for r in rows)
    order = [GOOD, NOT_CERTIFIED, LIKELY_NOT_GOOD, "skipped", "error"]
    summary = {k: counts.get(k, 0) for k in order}
    summary["total"] = len(rows)
    if args.output == "json":
        sys.stdout.write(to_json({"type": str(t), "rank": t.rank, "seed": args.seed, "rows": rows, "summary": summary}))
        return 0
    body = []
    for r in rows:
        if r["status"] == "ok":
            rep = r["report"]
            ind = rep["independence"]
            body.append([r["partition"], rep["dim_ge"], rep["degrees"], ind["degree_sum"], ind["bound"],
                          ind["jacobian_rank"], rep["verdict"]])
        else:
            body.append([r["partition"], "-", "-", "-", "-", "-", f"{r['status']}: {r['message']}"])
    out = [f"scan of {t} ({t.name}), {len(rows)} orbits", ""]
    out += table(["partition", "dim g^e", "degrees", "sum", "bound", "rank", "verdict"], body)
    out += ["", "summary: " + ", ".join(f"{k} {v}" for k, v in summary.items())]
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_orbit_list(args) -> int:
    t = _type(args)
    parts = [str(lam) for lam in enumerate_partitions(t)]
    if args.output == "json":
        sys.stdout.write(to_json({"type": str(t), "partitions": parts}))
    else:
        sys.stdout.write("".join(p + "\n" for p in parts))
    return 0


EXPLANATION = """\
How the verdict is reached:
  1. e is the standard nilpotent with Jordan type ({partition}); h and f complete it to an sl2-triple.
  2. The slice e + g^f has {r} coordinates t_j; t_j has Slodowy weight m_j + 2, where -m_j is its ad h weight.
  3. Each generator q_i of degree d_i restricts to a polynomial kappa(q_i) that is
     Slodowy-homogeneous of degree 2 d_i (checked at run time).
  4. ^e q_i is the lowest standard-degree part of kappa(q_i); it is invariant under g^e.
  5. The sum of deg ^e q_i never exceeds (dim g^e + l)/2, with equality exactly when the
     ^e q_i are algebraically independent. A Jacobian rank computation confirms the same answer.
  6. Independence for some generating sequence makes e good. If the standard generators fall short,
     degree-preserving changes of generators are searched. Running out of trials gives
     LikelyNotGood, never a definite negative.
"""


def cmd_explain(args) -> int:
    t = _type(args)
    lam = _partition(args, t)
    report = _run(args, t, lam)
    if args.output == "json":
        sys.stdout.write(serialize(report, "json"))
        return report.exit_code
    sys.stdout.write(serialize(report, "human"))
    sys.stdout.write("\n" + EXPLANATION.format(partition=lam, r=report.dim_ge))
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", required=True, choices=list("ABCDabcd"), help="classical family")
    common.add_argument("--rank", required=True, type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="modular Jacobian rank trials")
    common.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                        help="perturbation trials (0 disables the search)")
    common.add_argument("--time-budget", type=float, default=0, help="seconds per orbit (0 = unlimited)")
    common.add_argument("--output", choices=("human", "json"), default="human")
    common.add_argument("--cache-dir", default=None, help="defaults to $GOODSLICE_CACHE_DIR or ~/.cache/goodslice")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--jobs", type=int, default=1, help="parallel orbits in scan")
    common.add_argument("--timings", action="store_true", help="include stage timings (breaks byte-identity)")
    common.add_argument("--show-polys", action="store_true", help="include kappa(q_i) and ^e q_i")

    parser = argparse.ArgumentParser(prog="goodslice", description="Goodness of nilpotent elements via Slodowy slices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_partition in (("check", cmd_check, True), ("scan", cmd_scan, False),
                                      ("orbit-list", cmd_orbit_list, False), ("explain", cmd_explain, True)):
        p = sub.add_parser(name, parents=[common])
        if needs_partition:
            p.add_argument("--partition", required=True, help="e.g. 5,3,2,2")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except budget.BudgetExceeded:
        print("error: time budget exhausted before a verdict", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
