"""Adapter seam for executing queries outside the embedded engine.

A deployment backed by an external graph database implements `QueryRunner`;
`EmbeddedQueryRunner` is the in-process reference. Results come back as
plain columns and rows: scalars stay as they are, nodes and edges are
converted to dictionaries (the same shapes the HTTP layer serves).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from ..graph.model import GraphEdge, GraphNode, PropertyGraph
from .executor import execute
from .parser import parse


def node_to_map(node: GraphNode) -> dict:
    return {
        "kind": "node",
        "id": node.id,
        "label": node.label,
        "properties": dict(node.properties),
    }


def edge_to_map(edge: GraphEdge) -> dict:
    return {
        "kind": "edge",
        "source": edge.source,
        "target": edge.target,
        "rel_type": edge.rel_type,
        "properties": dict(edge.properties),
        "index": edge.index,
    }


def cell_to_wire(value: object) -> object:
    if isinstance(value, GraphNode):
        return node_to_map(value)
    if isinstance(value, GraphEdge):
        return edge_to_map(value)
    return value


@dataclass
class AdapterResult:
    columns: list[str] = field(default_factory=list)
    rows: list[list[object]] = field(default_factory=list)


@runtime_checkable
class QueryRunner(Protocol):
    def run(self, query_text: str) -> AdapterResult: ...


class EmbeddedQueryRunner:
    """Runs queries against an in-process graph. Parse and execution errors
    propagate as ParseError and ExecutionError."""

    def __init__(self, graph: PropertyGraph):
        self._graph = graph

    def run(self, query_text: str) -> AdapterResult:
        table = execute(parse(query_text), self._graph)
        rows = [[cell_to_wire(cell) for cell in row] for row in table.rows]
        return AdapterResult(columns=list(table.columns), rows=rows)
