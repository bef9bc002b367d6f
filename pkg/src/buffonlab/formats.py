"""Deterministic machine output: JSON payloads and CSV tables.

All floats are fixed to 9 significant decimal digits before emission, so
identical runs serialize to identical bytes on any platform.  Non-finite
values become JSON null.
"""

from __future__ import annotations

import json
import math
from typing import Optional

from . import sequential, stats


def fmt_float(x: float) -> str:
    """9-significant-digit decimal rendering."""
    return f"{x:.9g}"


def round9(x: Optional[float]):
    """Float rounded to 9 significant digits; None for non-finite or missing."""
    if x is None or not math.isfinite(x):
        return None
    return float(fmt_float(x))


def summary_entry(name: str, summary: stats.EstimateSummary) -> dict:
    return {
        "name": name,
        "point": round9(summary.point),
        "stderr": round9(summary.stderr),
        "ci95": [round9(summary.ci95_low), round9(summary.ci95_high)],
        "n": summary.n_effective,
    }


def payload(command: str, config: dict, estimates: list, derived: dict) -> str:
    """The one JSON schema every command emits."""
    doc = {
        "command": command,
        "config": config,
        "estimates": estimates,
        "derived": derived,
    }
    return json.dumps(doc, indent=2) + "\n"


def trace_csv(trace: sequential.SequentialTrace,
              l_num: Optional[int] = None, l_den: Optional[int] = None) -> str:
    """Sequential trace rows; rational columns filled when l/a = l_num/l_den is known.

    Records without a crossing yet have no estimate and leave all three
    estimate columns empty.
    """
    lines = ["n,m,estimate_num,estimate_den,estimate_float"]
    rational = l_num is not None and l_den is not None
    ns = trace.ns.tolist()
    ms = trace.ms.tolist()
    ests = trace.estimates.tolist()
    for n, m, est in zip(ns, ms, ests):
        if m < 1:
            lines.append(f"{n},{m},,,")
            continue
        if rational:
            r = sequential.exact_estimate_rational(l_num, l_den, n, m)
            lines.append(f"{n},{m},{r.numerator},{r.denominator},{fmt_float(est)}")
        else:
            lines.append(f"{n},{m},,,{fmt_float(est)}")
    return "\n".join(lines) + "\n"


def ant_csv(n_values, area_values) -> str:
    """Per-repetition intersection counts and area estimates."""
    lines = ["rep,N,area_estimate"]
    for rep, (n, area) in enumerate(zip(n_values.tolist(), area_values.tolist())):
        lines.append(f"{rep},{n},{fmt_float(area)}")
    return "\n".join(lines) + "\n"


def scatter_csv(sets: list) -> str:
    """Segment coordinates of labeled sets, e.g. [("a", set_a), ("b", set_b)]."""
    lines = ["px,py,theta,len,set_id"]
    for label, seg_set in sets:
        for px, py, theta, length in zip(seg_set.px.tolist(), seg_set.py.tolist(),
                                         seg_set.theta.tolist(),
                                         seg_set.lengths.tolist()):
            lines.append(f"{fmt_float(px)},{fmt_float(py)},{fmt_float(theta)},"
                         f"{fmt_float(length)},{label}")
    return "\n".join(lines) + "\n"
