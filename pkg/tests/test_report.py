import json

import pytest

from builders import make_trace
from conftest import DATA
from gripcheck.catalog import builtin_catalog
from gripcheck.monitor import Status, TraceView, Verdict, evaluate
from gripcheck.report import (
    MAX_EVIDENCE_REFS,
    TREND_FOOTNOTE,
    TraceabilityRow,
    build_rows,
    exit_code,
    render_json,
    render_table,
    report_dict,
)

CAT = builtin_catalog()


def rows_for(traces, n_min=2):
    views = [TraceView(t, name=f"trial_{i:05d}.jsonl") for i, t in enumerate(traces)]
    return build_rows(evaluate(CAT, views, n_min), [v.name for v in views], [v.n_events for v in views])


def row(status, kind="threshold"):
    return TraceabilityRow("R", "safety", kind, "", (), Verdict(status), ())


@pytest.mark.parametrize("statuses,code", [
    ([Status.PASS, Status.BY_DESIGN], 0),
    ([Status.PASS, Status.FAIL, Status.INSUFFICIENT_DATA], 1),
    ([Status.PASS, Status.INSUFFICIENT_DATA], 3),
    ([], 0),
])
def test_exit_code_precedence(statuses, code):
    assert exit_code([row(s) for s in statuses] + [row(Status.NEEDS_HUMAN_REVIEW, "manual")]) == code


def test_evidence_points_at_trace_lines():
    traces = [make_trace(trial_id=0), make_trace(trial_id=1, drop_at=6.0)]
    rows = {r.requirement_id: r for r in rows_for(traces)}
    ((name, line),) = rows["RQ2.2"].evidence_refs
    assert name == "trial_00001.jsonl"
    assert traces[1].events[line - 1].kind.value == "item_dropped"
    # a never-grasped trial has no event to cite, so the reference is the last line
    rows = {r.requirement_id: r for r in rows_for([make_trace(grasp_at=None)])}
    ((_, line),) = rows["RQ2.2"].evidence_refs
    assert line == len(make_trace(grasp_at=None).events)


def test_evidence_is_capped():
    traces = [make_trace(trial_id=i, drop_at=6.0) for i in range(MAX_EVIDENCE_REFS + 5)]
    rows = {r.requirement_id: r for r in rows_for(traces)}
    assert len(rows["RQ2.2"].evidence_refs) == MAX_EVIDENCE_REFS
    assert rows["RQ2.2"].verdict.status is Status.FAIL


def test_report_schema():
    rows = rows_for([make_trace(trial_id=i) for i in range(3)])
    report = report_dict(rows, "catalog", 3, 2)
    assert report["schema_version"] == 1
    assert sum(report["summary"].values()) == len(CAT)
    assert report["footnotes"] == [TREND_FOOTNOTE]
    assert [r["requirement_id"] for r in report["rows"]] == CAT.ids()
    trend = next(r for r in report["rows"] if r["requirement_id"] == "RQ2.5")
    assert trend["footnote"] == TREND_FOOTNOTE
    assert json.loads(render_json(report)) == report
    for r in report["rows"]:
        assert set(r["verdict"]) == {"status", "n_applicable", "n_satisfied", "point_estimate",
                                     "ci_lower_95", "detail"}


def test_table_rendering():
    rows = rows_for([make_trace(trial_id=i) for i in range(3)])
    plain = render_table(rows)
    lines = plain.splitlines()
    assert lines[0].split()[:4] == ["ID", "Category", "Kind", "Status"]
    assert len(lines) == 2 + len(CAT) + 2
    assert "Note (RQ2.5, RQ2.6)" in lines[-1]
    assert "\x1b[" not in plain
    colored = render_table(rows, color=True)
    assert "\x1b[32mPass" in colored and "\x1b[36mByDesign" in colored


@pytest.mark.slow
def test_golden_report_matches_checked_in(golden_run):
    assert golden_run["verify"].exit_code == 0, golden_run["verify"].output
    expected = json.loads((DATA / "golden_report.json").read_text())
    assert golden_run["report"] == expected
