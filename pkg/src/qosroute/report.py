"""Render generation tables and route results as text, CSV or JSON."""

from __future__ import annotations

import csv
import io
import json

HEADERS = ("Chromosome", "No. of Nodes Visited", "Fitness", "Probability of selecting chromosome")


def _num(x) -> str:
    return "1" if x == 1 else ("0" if x == 0 else f"{x:.4f}")


def text_table(report) -> str:
    rows = [HEADERS] + [
        (r.label, str(r.nodes_visited), _num(r.fitness), _num(r.probability)) for r in report.records
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(HEADERS))]
    lines = [f"GENERATION {report.index}"]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def route_line(route) -> str:
    nodes = " ".join(map(str, route.path))
    label = f"{route.label} " if route.label else ""
    return (f"selected: {label}path {nodes} hops={route.hop_count} "
            f"bottleneck_ab={route.bottleneck_ab!r} probability={route.probability!r}")


def csv_rows(trace):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("generation", "chromosome", "path", "nodes_visited", "ab", "fitness", "probability", "elite"))
    for report in trace:
        for r in report.records:
            writer.writerow((report.index, r.label, " ".join(map(str, r.path)), r.nodes_visited,
                             repr(r.ab), repr(r.fitness), repr(r.probability), int(r.elite)))
    return buf.getvalue()


def route_dict(route) -> dict:
    return {
        "path": list(route.path),
        "label": route.label,
        "hop_count": route.hop_count,
        "bottleneck_ab": route.bottleneck_ab,
        "probability": route.probability,
    }


def trace_dict(trace) -> list:
    return [
        {
            "generation": rep.index,
            "records": [
                {
                    "label": r.label,
                    "path": list(r.path),
                    "nodes_visited": r.nodes_visited,
                    "ab": r.ab,
                    "fitness": r.fitness,
                    "probability": r.probability,
                    "elite": r.elite,
                }
                for r in rep.records
            ],
        }
        for rep in trace
    ]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
