"""JSON, CSV and SVG output for solve reports."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .curves import export_csv
from .equation import F_critical_points, Orientation
from .solver import SolveReport

__all__ = ["report_to_dict", "emit_report", "parse_report", "write_svg", "export_csv"]


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _f(x) -> Any:
    # JSON has no inf/nan; they only show up for failed quantities
    x = float(x)
    return x if math.isfinite(x) else None


def report_to_dict(report: SolveReport) -> dict:
    """JSON-ready view of a report; complex numbers become [re, im] pairs."""
    prob = report.problem
    out: dict = {
        "problem": {"m": prob.m, "n": prob.n, "d": prob.d, "w": _c(prob.w)},
        "solutions": [
            {"z": _c(s.z), "residual": _f(s.residual), "orientation": s.orientation.value, "source": s.source}
            for s in report.solutions
        ],
        "counts": {
            "N": report.N,
            "N_plus": report.N_plus,
            "N_minus": report.N_minus,
            "N_degenerate": report.N_degenerate,
        },
        "degree_winding": report.degree_winding,
        "bounds": {"lower_ok": bool(report.bounds_ok[0]), "upper_ok": bool(report.bounds_ok[1])},
        "certificate": {
            "count": report.certificate_count,
            "points": [
                {"z": _c(p.z), "curve": p.curve, "residual": _f(p.residual)} for p in report.certificate_points
            ],
        },
        "dynamics": None,
        "status": report.status,
    }
    dc = report.dynamics_check
    if dc is not None:
        out["dynamics"] = {
            "n_minus": dc.n_minus,
            "fixed_points": [
                {
                    "z": _c(f.z),
                    "multiplier_modulus": _f(f.multiplier_modulus),
                    "seed": _c(f.seed),
                    "iterations": f.iterations,
                }
                for f in dc.fixed_points
            ],
            "fatou_ok": bool(dc.fatou_ok),
        }
    if report.perturbed_counts is not None:
        out["perturbed_counts"] = report.perturbed_counts
    if report.notes:
        out["notes"] = list(report.notes)
    return out


def emit_report(report: SolveReport) -> str:
    """Serialise a report; floats use the shortest exact round-trip form."""
    return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


# --------------------------------------------------------------------------
# SVG


_STYLE = """
.curve { fill: none; stroke: #4a6fa5; }
.positive { fill: #2e8b57; }
.negative { fill: #c0392b; }
.degenerate { fill: #f1c40f; }
.pole { stroke: #000000; }
.critical { fill: none; stroke: #7d3c98; }
.axis { stroke: #bbbbbb; }
"""


def _polylines(report: SolveReport) -> list[list[complex]]:
    tr = report.trace
    lines = []
    if tr is None:
        return lines
    source = tr.curve_trace or tr
    for arc in source.arcs:
        current: list[complex] = []
        for i in range(len(arc.ts)):
            z = arc.z(i)
            if math.isfinite(abs(z)):
                current.append(z)
            elif len(current) > 1:
                lines.append(current)
                current = []
        if len(current) > 1:
            lines.append(current)
    return lines


def write_svg(report: SolveReport, path, size: int = 800) -> None:
    """Static plot of the traced level curves, classified solutions, poles and critical points."""
    R = report.box_radius
    mark = R / 120.0
    # y is flipped so the upper half-plane is drawn on top
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{-R!r} {-R!r} {2 * R!r} {2 * R!r}">',
        f"<style>{_STYLE}</style>",
        '<g transform="scale(1,-1)" stroke-width="1" vector-effect="non-scaling-stroke">',
        f'<line class="axis" x1="{-R!r}" y1="0" x2="{R!r}" y2="0" vector-effect="non-scaling-stroke"/>',
        f'<line class="axis" x1="0" y1="{-R!r}" x2="0" y2="{R!r}" vector-effect="non-scaling-stroke"/>',
    ]
    for line in _polylines(report):
        pts = " ".join(f"{z.real!r},{z.imag!r}" for z in line if abs(z) <= 4 * R)
        parts.append(f'<polyline class="curve" points="{pts}" vector-effect="non-scaling-stroke"/>')
    for a in report.problem.pole_list:
        x, y = a.real, a.imag
        parts.append(
            f'<path class="pole" d="M{x - mark!r},{y - mark!r}L{x + mark!r},{y + mark!r}'
            f'M{x - mark!r},{y + mark!r}L{x + mark!r},{y - mark!r}" vector-effect="non-scaling-stroke"/>'
        )
    for c, _ in F_critical_points(report.problem):
        x, y = c.real, c.imag
        parts.append(
            f'<path class="critical" d="M{x!r},{y + mark!r}L{x + mark!r},{y!r}L{x!r},{y - mark!r}'
            f'L{x - mark!r},{y!r}Z" vector-effect="non-scaling-stroke"/>'
        )
    classes = {Orientation.POSITIVE: "positive", Orientation.NEGATIVE: "negative", Orientation.DEGENERATE: "degenerate"}
    for s in report.solutions:
        parts.append(
            f'<circle class="{classes[s.orientation]}" cx="{s.z.real!r}" cy="{s.z.imag!r}" r="{mark!r}"/>'
        )
    parts.append("</g></svg>")
    Path(path).write_text("\n".join(parts) + "\n")
