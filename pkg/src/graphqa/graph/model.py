"""In-memory property graph: typed nodes, directed typed edges, adjacency indexes.

The graph is immutable once constructed and therefore safe for concurrent
readers. All property values are plain strings; numeric interpretation is the
query executor's job.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping


def _frozen_properties(properties: Mapping[str, str]) -> Mapping[str, str]:
    return MappingProxyType(dict(properties))


@dataclass(frozen=True)
class GraphNode:
    """A node with an opaque string id, a label, and string properties.

    The id and display name are mirrored into ``properties`` under the keys
    ``id`` and ``name`` so that property access in queries covers them.
    """

    id: str
    label: str
    properties: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "properties", _frozen_properties(self.properties))

    def __hash__(self) -> int:
        return hash(("node", self.id))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphNode):
            return NotImplemented
        return self.id == other.id and self.label == other.label


@dataclass(frozen=True)
class GraphEdge:
    """A directed edge. ``index`` is the position in the ingestion order and
    distinguishes parallel edges with identical endpoints and type."""

    source: str
    target: str
    rel_type: str
    properties: Mapping[str, str] = field(default_factory=dict)
    index: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "properties", _frozen_properties(self.properties))

    def __hash__(self) -> int:
        return hash(("edge", self.index, self.source, self.target, self.rel_type))


class PropertyGraph:
    """Nodes plus adjacency indexes; construct once, then read only."""

    def __init__(
        self,
        nodes: Iterable[GraphNode],
        edges: Iterable[GraphEdge],
        relation_descriptions: Mapping[str, str] | None = None,
        parent_child: Mapping[str, object] | None = None,
    ) -> None:
        by_id: dict[str, GraphNode] = {}
        for node in nodes:
            if node.id in by_id:
                raise ValueError(f"duplicate node id {node.id!r}")
            by_id[node.id] = node
        self._nodes = dict(sorted(by_id.items()))

        edge_list: list[GraphEdge] = []
        outgoing: dict[str, list[GraphEdge]] = {nid: [] for nid in self._nodes}
        incoming: dict[str, list[GraphEdge]] = {nid: [] for nid in self._nodes}
        for edge in edges:
            if edge.source not in self._nodes or edge.target not in self._nodes:
                raise ValueError(
                    f"edge ({edge.source})-[:{edge.rel_type}]->({edge.target}) "
                    "references a missing node"
                )
            edge_list.append(edge)
            outgoing[edge.source].append(edge)
            incoming[edge.target].append(edge)
        self._edges = tuple(edge_list)
        self._outgoing = {nid: tuple(es) for nid, es in outgoing.items()}
        self._incoming = {nid: tuple(es) for nid, es in incoming.items()}

        by_label: dict[str, list[GraphNode]] = {}
        for node in self._nodes.values():
            by_label.setdefault(node.label, []).append(node)
        self._by_label = {label: tuple(ns) for label, ns in sorted(by_label.items())}

        # (label, property, value) membership index; used by the synonym
        # preprocessor to verify candidate values against the graph.
        values: dict[tuple[str | None, str], set[str]] = {}
        for node in self._nodes.values():
            for key, value in node.properties.items():
                values.setdefault((node.label, key), set()).add(value)
                values.setdefault((None, key), set()).add(value)
        self._value_index = values

        self.relation_descriptions: Mapping[str, str] = MappingProxyType(
            dict(relation_descriptions or {})
        )
        self.parent_child: Mapping[str, object] = MappingProxyType(
            dict(parent_child or {})
        )

    # -- basic access ------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def node(self, node_id: str) -> GraphNode:
        return self._nodes[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def nodes(self) -> tuple[GraphNode, ...]:
        """All nodes, sorted by id for deterministic iteration."""
        return tuple(self._nodes.values())

    def edges(self) -> tuple[GraphEdge, ...]:
        return self._edges

    def nodes_with_label(self, label: str) -> tuple[GraphNode, ...]:
        return self._by_label.get(label, ())

    def labels(self) -> tuple[str, ...]:
        return tuple(self._by_label)

    # -- adjacency ---------------------------------------------------------

    def outgoing(self, node_id: str) -> tuple[GraphEdge, ...]:
        return self._outgoing.get(node_id, ())

    def incoming(self, node_id: str) -> tuple[GraphEdge, ...]:
        return self._incoming.get(node_id, ())

    # -- value membership ---------------------------------------------------

    def has_property_value(self, label: str | None, key: str, value: str) -> bool:
        """True when some node (optionally restricted to ``label``) carries
        ``key`` = ``value``."""
        return value in self._value_index.get((label, key), ())
