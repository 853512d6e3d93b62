"""Set-overlap scoring of query results.

Rows are canonicalized before comparison: node cells collapse to their id,
edge cells to (source, rel_type, target), scalars to a normalized string;
cell order within a row is preserved and duplicate rows collapse. Two
result tables match when their canonical row sets match, so column naming
and row ordering never affect the score.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..cypher.adapter import AdapterResult
from ..cypher.executor import ResultTable
from ..graph.model import GraphEdge, GraphNode


@dataclass(frozen=True)
class RetrievalMetrics:
    iou: float
    precision: float
    recall: float


def _canonical_scalar(value: object) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    if isinstance(value, str):
        return value.lower()
    return str(value)


def canonical_cell(value: object) -> object:
    if isinstance(value, GraphNode):
        return value.id
    if isinstance(value, GraphEdge):
        return (value.source, value.rel_type, value.target)
    if isinstance(value, Mapping):
        if value.get("kind") == "node":
            return value.get("id")
        if value.get("kind") == "edge":
            return (value.get("source"), value.get("rel_type"), value.get("target"))
    return _canonical_scalar(value)


def canonical_row(row: Sequence[object]) -> tuple:
    return tuple(canonical_cell(cell) for cell in row)


def row_set(result: ResultTable | AdapterResult | Iterable[Sequence[object]]) -> frozenset:
    rows = result.rows if hasattr(result, "rows") else result
    return frozenset(canonical_row(row) for row in rows)


def set_metrics(generated: frozenset | set, gold: frozenset | set) -> RetrievalMetrics:
    """Overlap scores with the empty-set conventions: two empty sets count
    as a perfect match, one empty side scores zero against a non-empty one."""
    if not generated and not gold:
        return RetrievalMetrics(iou=1.0, precision=1.0, recall=1.0)
    intersection = len(generated & gold)
    union = len(generated | gold)
    iou = intersection / union
    precision = intersection / len(generated) if generated else 0.0
    recall = intersection / len(gold) if gold else 0.0
    return RetrievalMetrics(iou=iou, precision=precision, recall=recall)


def row_set_metrics(
    generated: ResultTable | AdapterResult | Iterable[Sequence[object]],
    gold: ResultTable | AdapterResult | Iterable[Sequence[object]],
) -> RetrievalMetrics:
    return set_metrics(row_set(generated), row_set(gold))


def mean_metrics(values: Sequence[RetrievalMetrics]) -> RetrievalMetrics:
    """Arithmetic mean in each component; an empty list scores zero across
    the board rather than raising."""
    if not values:
        return RetrievalMetrics(iou=0.0, precision=0.0, recall=0.0)
    count = len(values)
    return RetrievalMetrics(
        iou=sum(m.iou for m in values) / count,
        precision=sum(m.precision for m in values) / count,
        recall=sum(m.recall for m in values) / count,
    )
