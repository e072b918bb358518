"""Serialization of verification reports: JSON, CSV and aligned text.

Valuations and bounds are written as exact strings (``"7"``, ``"20/3"``,
``"inf"``); nothing is ever rendered as a decimal.
"""

from __future__ import annotations

import csv
import io
import json

from .arith import format_val, parse_val
from .verify import Row, VerificationReport

CSV_HEADER = ["claim_id", "p", "k", "i", "observed", "required", "margin", "status"]


def _row_status(row):
    return "pass" if row.passed else "fail"


def report_to_dict(r: VerificationReport) -> dict:
    rows = []
    for row in r.rows:
        d = {
            "i": row.i,
            "observed": format_val(row.observed),
            "required": format_val(row.required),
            "margin": format_val(row.margin),
        }
        if row.label:
            d["label"] = row.label
        rows.append(d)
    return {
        "claim_id": r.claim_id,
        "params": dict(r.params),
        "status": r.status,
        "rows": rows,
        "details": r.details,
    }


def report_from_dict(d: dict) -> VerificationReport:
    rows = [
        Row(
            i=row["i"],
            observed=parse_val(row["observed"]),
            required=parse_val(row["required"]),
            margin=parse_val(row["margin"]),
            label=row.get("label", ""),
        )
        for row in d["rows"]
    ]
    return VerificationReport(d["claim_id"], dict(d["params"]), d["status"], rows, dict(d["details"]))


def to_json(reports) -> str:
    if isinstance(reports, VerificationReport):
        payload = report_to_dict(reports)
    else:
        payload = [report_to_dict(r) for r in reports]
    return json.dumps(payload, indent=2) + "\n"


def from_json(text: str):
    payload = json.loads(text)
    if isinstance(payload, list):
        return [report_from_dict(d) for d in payload]
    return report_from_dict(payload)


def to_csv(reports) -> str:
    """One line per row.  Labelled rows carry their label in the claim column as CLAIM/label."""
    if isinstance(reports, VerificationReport):
        reports = [reports]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        p = r.params.get("p", "")
        k = r.params.get("k", "")
        for row in r.rows:
            claim = f"{r.claim_id}/{row.label}" if row.label else r.claim_id
            w.writerow([
                claim, p, k, row.i, format_val(row.observed), format_val(row.required),
                format_val(row.margin), _row_status(row),
            ])
    return buf.getvalue()


def to_text(reports) -> str:
    if isinstance(reports, VerificationReport):
        reports = [reports]
    out = []
    for r in reports:
        prm = " ".join(f"{k}={v}" for k, v in r.params.items())
        out.append(f"{r.claim_id}  {prm}  [{r.status.upper()}]")
        if r.status == "skipped":
            out.append(f"  skipped: {r.details.get('reason', '')}")
            out.append("")
            continue
        table = [("label", "i", "observed", "required", "margin", "")]
        for row in r.rows:
            table.append((row.label, str(row.i), format_val(row.observed),
                          format_val(row.required), format_val(row.margin),
                          "ok" if row.passed else "VIOLATION"))
        if not any(row.label for row in r.rows):
            table = [t[1:] for t in table]
        widths = [max(len(t[c]) for t in table) for c in range(len(table[0]))]
        for t in table:
            out.append("  " + "  ".join(cell.rjust(wd) for cell, wd in zip(t, widths)).rstrip())
        for key, val in r.details.items():
            out.append(f"  {key}: {val}")
        out.append("")
    return "\n".join(out)


FORMATTERS = {"json": to_json, "csv": to_csv, "text": to_text}


def emit_report(reports, fmt: str = "text", out: str | None = None, stream=None) -> str:
    """Render reports and write them to ``out`` (a path) or ``stream``; returns the text."""
    text = FORMATTERS[fmt](reports)
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif stream is not None:
        stream.write(text)
    return text
