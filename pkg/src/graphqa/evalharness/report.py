"""Report rendering: human-readable tables and machine-readable records.

The retrieval table columns are Model | EE | IoU | Precision | Recall with
scores as percentages to one decimal. The robustness table counts denials,
hedges, and full answers as count/total with the percentage alongside.
"""

from __future__ import annotations

import json
from typing import Sequence

from .harness import MetricsReport, SampleOutcome
from .metrics import RetrievalMetrics

ROBUSTNESS_ROW_LABELS = {
    "denied": "Answer Denied",
    "uncertain": "Uncertain Answer",
    "full": "Full Answer",
}


def _percent(value: float) -> str:
    return f"{value * 100:.1f}"


def _render_rows(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(cell) for cell in header]
    for row in rows:
        for index, cell in enumerate(row):
            widths[index] = max(widths[index], len(cell))
    lines = [" | ".join(cell.ljust(widths[i]) for i, cell in enumerate(header)).rstrip()]
    for row in rows:
        lines.append(" | ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def render_retrieval_table(reports: Sequence[MetricsReport]) -> str:
    """One row per run, in the given order."""
    header = ("Model", "EE", "IoU", "Precision", "Recall")
    rows = []
    for report in reports:
        metadata = report.metadata
        rows.append(
            (
                str(metadata.get("model", "?")),
                "yes" if metadata.get("entity_enhancement") else "no",
                _percent(report.aggregate.iou),
                _percent(report.aggregate.precision),
                _percent(report.aggregate.recall),
            )
        )
    return _render_rows(header, rows)


def render_robustness_table(report: MetricsReport) -> str:
    counts = report.robustness_counts
    total = sum(counts.values())
    header = ("Outcome", "Count")
    rows = []
    for kind in ("denied", "uncertain", "full"):
        count = counts.get(kind, 0)
        share = _percent(count / total) if total else _percent(0.0)
        rows.append((ROBUSTNESS_ROW_LABELS[kind], f"{count}/{total} ({share})"))
    return _render_rows(header, rows)


def _metrics_to_wire(metrics: RetrievalMetrics) -> dict:
    return {"iou": metrics.iou, "precision": metrics.precision, "recall": metrics.recall}


def _outcome_to_wire(outcome: SampleOutcome) -> dict:
    record = {
        "sample_id": outcome.sample_id,
        "metrics": _metrics_to_wire(outcome.metrics),
        "status": outcome.status,
    }
    if outcome.note is not None:
        record["note"] = outcome.note
    if outcome.generated_cypher is not None:
        record["generated_cypher"] = outcome.generated_cypher
    if outcome.verdict is not None:
        record["verdict"] = outcome.verdict
    if outcome.answer is not None:
        record["answer"] = outcome.answer
    return record


def report_to_wire(report: MetricsReport) -> dict:
    return {
        "per_sample": [_outcome_to_wire(outcome) for outcome in report.per_sample],
        "aggregate": _metrics_to_wire(report.aggregate),
        "robustness_counts": dict(report.robustness_counts),
        "metadata": dict(report.metadata),
    }


def report_to_json(report: MetricsReport) -> str:
    return json.dumps(report_to_wire(report), indent=2, sort_keys=True)
