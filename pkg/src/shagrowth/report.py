"""Table, JSON and CSV renderings. Every number is printed from the same exact strings."""

from __future__ import annotations

import csv
import io
import json

from .assembler import GrowthReport
from .exact import ExactOrInterval, format_fraction


def _cell(x: ExactOrInterval) -> str:
    return str(x)


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(header), line(["-" * w for w in widths])]
    out += [line(r) for r in rows]
    return "\n".join(out)


def machine(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def growth_rows(report: GrowthReport) -> list[list[str]]:
    rows = []
    for r, sha in zip(report.layers, report.sha_intervals):
        rows.append([str(r.n), format_fraction(r.exponent.center), format_fraction(r.exponent.halfwidth),
                     "yes" if r.exact else "no", format_fraction(sha.lo), format_fraction(sha.hi)])
    return rows


GROWTH_HEADER = ["layer", "exponent_center", "exponent_halfwidth", "exact", "sha_lo", "sha_hi"]


def growth_table(report: GrowthReport) -> str:
    doc = report.to_json()
    lines = [f"p = {report.p}   tower = {report.tower}   degree = {report.degree}", ""]
    lines.append(_table(GROWTH_HEADER, growth_rows(report)))
    lines.append("")
    lines.append(f"mu = {doc['mu']}   ({report.mu_source})")
    for i, c in enumerate(doc["coefficients"], start=1):
        if c is None:
            lines.append(f"mu_{i} = unresolved")
            continue
        tag = " (fluctuating)" if i in report.fluctuating else ""
        if isinstance(c, dict):
            c = f"{c['even']} (n even), {c['odd']} (n odd)"
        lines.append(f"mu_{i} = {c}{tag}")
    if report.constant_term is not None:
        lines.append(f"constant term = {report.constant_term}")
    breakdown = []
    for r in report.layers:
        for c in r.places:
            g = c.gamma
            breakdown.append([str(r.n), c.place, str(c.e), str(c.f), str(c.count),
                              _cell(g.tamagawa), _cell(g.omega_phi), _cell(c.total)])
    if breakdown:
        lines += ["", _table(["layer", "place", "e", "f", "count", "tamagawa", "omega_phi", "total"], breakdown)]
    if report.assumptions:
        lines += ["", "assumptions:"] + [f"  - {a}" for a in report.assumptions]
    return "\n".join(lines)


def growth_csv(report: GrowthReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GROWTH_HEADER)
    w.writerows(growth_rows(report))
    return buf.getvalue()


def local_table(data: dict) -> str:
    return _table(["field", "value"], [[k, str(v)] for k, v in data.items()])
