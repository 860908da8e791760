"""Traceability report: one row per requirement, rendered as JSON or a table."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import Kind, Requirement
from .monitor import Outcome, RequirementResult, Status, Verdict

REPORT_SCHEMA_VERSION = 1
MAX_EVIDENCE_REFS = 20

TREND_FOOTNOTE = (
    "Trend bounds are absolute: the outcome rate in the final hour window may exceed the "
    "baseline window's rate by at most the stated number of percentage points. Read as a "
    "relative increase over the baseline rate, the same bound would be much stricter when "
    "the baseline rate is low."
)

STATUS_COLORS = {
    Status.PASS: "32",
    Status.BY_DESIGN: "36",
    Status.FAIL: "31",
    Status.INSUFFICIENT_DATA: "33",
    Status.NEEDS_HUMAN_REVIEW: "35",
}


@dataclass(frozen=True)
class TraceabilityRow:
    requirement_id: str
    category: str
    kind: str
    text: str
    methods: tuple[str, ...]
    verdict: Verdict
    evidence_refs: tuple[tuple[str, int], ...]
    footnote: Optional[str] = None

    def to_dict(self) -> dict:
        v = self.verdict
        d = {
            "requirement_id": self.requirement_id,
            "category": self.category,
            "kind": self.kind,
            "text": self.text,
            "methods": list(self.methods),
            "verdict": {
                "status": v.status.value,
                "n_applicable": v.n_applicable,
                "n_satisfied": v.n_satisfied,
                "point_estimate": v.point_estimate,
                "ci_lower_95": v.ci_lower_95,
                "detail": v.detail,
            },
            "evidence_refs": [{"trace": f, "line": line} for f, line in self.evidence_refs],
        }
        if self.footnote:
            d["footnote"] = self.footnote
        return d


def method_label(req: Requirement) -> tuple[str, ...]:
    return tuple(m.method.value + (f" ({m.detail})" if m.detail else "") for m in req.methods)


def build_rows(results: Sequence[RequirementResult], trace_names: Sequence[str],
               trace_lengths: Sequence[int]) -> list[TraceabilityRow]:
    """Rows in document order; evidence points at (trace file, 1-based line)."""
    rows = []
    for res in results:
        req = res.requirement
        refs = []
        for trial_pos, tr in enumerate(res.trials):
            if tr.outcome is not Outcome.VIOLATED:
                continue
            for ev in tr.evidence:
                line = ev.event_index + 1 if ev.event_index is not None else trace_lengths[trial_pos]
                refs.append((trace_names[trial_pos], line))
            if len(refs) >= MAX_EVIDENCE_REFS:
                break
        rows.append(TraceabilityRow(
            requirement_id=req.id,
            category=req.category.value,
            kind=req.kind.value,
            text=req.text,
            methods=method_label(req),
            verdict=res.verdict,
            evidence_refs=tuple(refs[:MAX_EVIDENCE_REFS]),
            footnote=TREND_FOOTNOTE if req.kind is Kind.TREND else None,
        ))
    return rows


def exit_code(rows: Sequence[TraceabilityRow]) -> int:
    """0 when every non-manual row passes (or holds by design), 1 on any failure,
    3 when nothing failed but some row lacks data."""
    statuses = {r.verdict.status for r in rows if r.kind != Kind.MANUAL.value}
    if Status.FAIL in statuses:
        return 1
    if Status.INSUFFICIENT_DATA in statuses:
        return 3
    return 0


def report_dict(rows: Sequence[TraceabilityRow], spec_name: str, n_traces: int, n_min: int,
                scenario_errors: int = 0) -> dict:
    counts = {s.value: 0 for s in Status}
    for r in rows:
        counts[r.verdict.status.value] += 1
    footnotes = [TREND_FOOTNOTE] if any(r.footnote for r in rows) else []
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "spec": spec_name,
        "n_traces": n_traces,
        "scenario_errors": scenario_errors,
        "n_min": n_min,
        "exit_code": exit_code(rows),
        "summary": counts,
        "rows": [r.to_dict() for r in rows],
        "footnotes": footnotes,
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _num(x: Optional[float]) -> str:
    return "-" if x is None else f"{x:.4f}"


def render_table(rows: Sequence[TraceabilityRow], color: bool = False) -> str:
    header = ("ID", "Category", "Kind", "Status", "n", "k", "Estimate", "CI low", "Methods")
    body = []
    for r in rows:
        v = r.verdict
        body.append((r.requirement_id, r.category, r.kind, v.status.value, str(v.n_applicable),
                     str(v.n_satisfied), _num(v.point_estimate), _num(v.ci_lower_95), "; ".join(r.methods)))
    widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h) for i, h in enumerate(header)]

    def line(cells, status=None):
        parts = []
        for i, cell in enumerate(cells):
            text = cell.ljust(widths[i]) if i < len(cells) - 1 else cell
            if color and i == 3 and status is not None:
                text = f"\x1b[{STATUS_COLORS[status]}m{text}\x1b[0m"
            parts.append(text)
        return "  ".join(parts).rstrip()

    out = [line(header), line(["-" * w for w in widths])]
    for r, cells in zip(rows, body):
        out.append(line(cells, r.verdict.status))
    marks = [r.requirement_id for r in rows if r.footnote]
    if marks:
        out.append("")
        out.append(f"Note ({', '.join(marks)}): {TREND_FOOTNOTE}")
    return "\n".join(out) + "\n"
