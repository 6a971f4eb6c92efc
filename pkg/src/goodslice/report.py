"""Rendering of goodness reports as JSON or an aligned text table."""

from __future__ import annotations

import json
from dataclasses import fields

from .criterion import GoodnessReport, IndependenceResult

# JSON keys, in output order
REPORT_KEYS = [f.name for f in fields(GoodnessReport)]
INDEPENDENCE_KEYS = ["degree_sum", "bound", "excess", "equality", "jacobian_rank", "rank_method", "trials"]


def report_to_dict(r: GoodnessReport) -> dict:
    out = {}
    for key in REPORT_KEYS:
        value = getattr(r, key)
        if key == "independence":
            value = {k: v for k, v in value.as_dict().items()}
        elif isinstance(value, list):
            value = list(value)
        out[key] = value
    return out


def report_from_dict(d: dict) -> GoodnessReport:
    if list(d) != REPORT_KEYS:
        raise ValueError(f"unexpected report keys {list(d)}")
    ind = d["independence"]
    if list(ind) != INDEPENDENCE_KEYS:
        raise ValueError(f"unexpected independence keys {list(ind)}")
    res = IndependenceResult(ind["degree_sum"], ind["bound"], ind["jacobian_rank"], ind["rank_method"], ind["trials"])
    if res.excess != ind["excess"] or res.equality != ind["equality"]:
        raise ValueError("inconsistent independence block")
    kwargs = {k: d[k] for k in REPORT_KEYS if k != "independence"}
    return GoodnessReport(independence=res, **kwargs)


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize(r: GoodnessReport, fmt: str = "human") -> str:
    if fmt == "json":
        return to_json(report_to_dict(r))
    if fmt == "human":
        return render_human(r)
    raise ValueError(f"unknown output format {fmt!r}")


def table(header: list[str], rows: list[list]) -> list[str]:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return lines


def degreestable(r: GoodnessReport) -> list[str]:
    rows = [[lab, d, e, 2 * d] for lab, d, e in zip(r.labels, r.source_degrees, r.degrees)]
    return table(["q", "d_i", "deg ^e q_i", "Slodowy 2d_i"], rows)


def render_human(r: GoodnessReport) -> str:
    ind = r.independence
    lines = [f"type {r.type}, partition ({r.partition})"]
    if r.very_even_flag:
        lines.append("very even: one of the two orbits with this partition (the other is its image under the outer automorphism)")
    lines.append(f"dim g^e = {r.dim_ge}, l = {r.rank}")
    lines.append("")
    lines.extend(degreestable(r))
    lines.append("")
    lines.append(f"sum deg ^e q_i = {ind.degree_sum}")
    lines.append(f"bound = (dim g^e + ℓ)/2 = {ind.bound}")
    lines.append(f"excess = {ind.excess}")
    lines.append(f"Jacobian rank = {ind.jacobian_rank} of {r.rank} ({ind.rank_method}, {ind.trials} trials)")
    if r.witness:
        lines.append(f"witness sequence: {r.witness}")
    if r.hilbert_check is not None:
        lines.append(f"Hilbert series truncation check: {'pass' if r.hilbert_check else 'FAIL'}")
    lines.append(f"verdict: {r.verdict}")
    if r.timings:
        lines.append("timings (s): " + ", ".join(f"{k} {v}" for k, v in r.timings.items()))
    if r.polys:
        lines.append("")
        for lab, entry in r.polys.items():
            lines.append(f"kappa({lab}) = {entry['kappa']}")
            lines.append(f"^e {lab} = {entry['initial']}")
    return "\n".join(lines) + "\n"
