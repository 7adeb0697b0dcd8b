"""Report rendering: stable JSON for machines, a short summary for people."""

import json

from .tasks import ERROR, FAIL, PASS, Report


def _json_bytes(obj):
    return (json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n").encode("utf-8")


def emit_report(report, fmt="json"):
    """Render a report.  JSON is key-sorted and compact; timings appear only in text."""
    if fmt == "json":
        return _json_bytes(report.to_dict())
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    counts = {s: sum(t.status == s for t in report.tasks) for s in (PASS, FAIL, ERROR)}
    lines = [f"{len(report.tasks)} tasks ({counts[PASS]} pass, {counts[FAIL]} fail, {counts[ERROR]} error)"]
    for t in report.tasks:
        lines.append(f"[{t.index}] {t.id} {t.kind}: {t.status.upper()} {t.outcome} ({t.seconds:.3f} s)")
        if t.message:
            lines.append(f"    {t.message}")
        for key in ("witness_parameter", "witness_coefficients", "c", "a", "b", "limit", "counterexample",
                    "union_identity", "intersection_identity", "violation_count"):
            val = t.result.get(key)
            if val is not None:
                lines.append(f"    {key}: {json.dumps(val, sort_keys=True)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_report(data):
    """Inverse of ``emit_report(..., "json")``."""
    return Report.from_dict(json.loads(data))


def emit_selftest(results, fmt="json"):
    passed = all(r.passed for r in results)
    if fmt == "json":
        return _json_bytes({"criteria": [r.to_dict() for r in results], "passed": passed})
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"criterion {r.number:2d} {mark}  {r.name} ({r.seconds:.2f} s)  {json.dumps(r.detail, sort_keys=True)}")
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return ("\n".join(lines) + "\n").encode("utf-8")
