"""Rendering of reports as JSON, CSV (subjects only) or a plain-text table."""

from __future__ import annotations

import csv
import io
import json

FORMATS = ("json", "csv", "table")
CSV_FIELDS = ("id", "kind", "method", "value", "imag", "err", "precision")


def to_json_text(data):
    return json.dumps(data, indent=2) + "\n"


def to_csv_text(data):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in data.get("subjects", []):
        writer.writerow(row)
    return buf.getvalue()


def _short(text, width=28):
    text = str(text)
    return text if len(text) <= width else text[: width - 3] + "..."


def to_table_text(data):
    lines = [f"experiment: {data.get('experiment', '?')}"]
    cfg = data.get("config", {})
    if cfg:
        lines.append("config: " + ", ".join(f"{k}={v}" for k, v in cfg.items()))
    hyp = data.get("hypothesis", {})
    if hyp:
        lines.append("hypothesis: " + ", ".join(f"{k}={v}" for k, v in hyp.items()))
    subjects = data.get("subjects", [])
    if subjects:
        lines.append("")
        lines.append(f"{'id':<24} {'method':<12} {'value':<30} {'imag':<30} err")
        for s in subjects:
            lines.append(
                f"{_short(s['id'], 24):<24} {s.get('method', ''):<12} {_short(s['value'], 30):<30} "
                f"{_short(s.get('imag', '0'), 30):<30} {s.get('err', '')}"
            )
    for c in data.get("certificates", []):
        lines.append("")
        kind = c.get("kind", "?")
        if kind == "rank":
            lines.append(f"rank certificate: {c['rank']} of {c['rows']} at {c['precision']} bits")
        elif kind in ("relation", "vector-relation"):
            coeffs = c["coefficients"]
            lines.append(f"{kind}: coefficients {coeffs} residual <= {c['residual']}")
        else:
            lines.append(
                f"{kind}: bound {c.get('bound')} at {c.get('precision')} bits, "
                f"lattice floor {c.get('norm_floor')} vs relation length <= {c.get('threshold')}"
            )
    checks = data.get("checks", [])
    if checks:
        failed = [c for c in checks if c.get("passed") is False]
        undecided = [c for c in checks if c.get("passed") is None]
        lines.append("")
        lines.append(f"checks: {len(checks)} run, {len(failed)} failed, {len(undecided)} undecided")
        for c in failed + undecided:
            lines.append(f"  {c['name']}: {c.get('detail', '')}")
    for note in data.get("notes", []):
        lines.append(f"note: {note}")
    lines.append(f"verdict: {data.get('verdict', '?')}")
    return "\n".join(lines) + "\n"


def render(data, fmt):
    if fmt == "json":
        return to_json_text(data)
    if fmt == "csv":
        return to_csv_text(data)
    if fmt == "table":
        return to_table_text(data)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
