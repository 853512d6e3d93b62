"""Schema extraction and text rendering for prompt construction."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .ingest import IngestError
from .model import PropertyGraph


@dataclass(frozen=True)
class NodeTypeInfo:
    label: str
    property_names: tuple[str, ...]


@dataclass(frozen=True)
class RelTypeInfo:
    rel_type: str
    source_labels: tuple[str, ...]
    target_labels: tuple[str, ...]
    property_names: tuple[str, ...]


@dataclass(frozen=True)
class ParentRule:
    """One child-to-parent mapping entry. ``kind`` is ``name`` (property
    values) or ``label`` (node labels)."""

    parent: str
    kind: str = "name"


@dataclass(frozen=True)
class GraphSchema:
    node_types: tuple[NodeTypeInfo, ...]
    rel_types: tuple[RelTypeInfo, ...]
    rel_descriptions: Mapping[str, str] = field(default_factory=dict)
    parent_child: Mapping[str, ParentRule] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rel_descriptions", MappingProxyType(dict(self.rel_descriptions)))
        object.__setattr__(self, "parent_child", MappingProxyType(dict(self.parent_child)))


def extract_schema(
    graph: PropertyGraph,
    relation_descriptions: Mapping[str, str] | None = None,
    parent_child: Mapping[str, ParentRule] | None = None,
) -> GraphSchema:
    """Collect labels, relationship types, and their property names from the
    graph. Descriptions and the parent/child map default to whatever was
    attached at ingestion."""
    node_types = []
    for label in graph.labels():
        names: set[str] = set()
        for node in graph.nodes_with_label(label):
            names.update(node.properties)
        node_types.append(NodeTypeInfo(label=label, property_names=tuple(sorted(names))))

    grouped: dict[str, tuple[set[str], set[str], set[str]]] = {}
    for edge in graph.edges():
        sources, targets, props = grouped.setdefault(edge.rel_type, (set(), set(), set()))
        sources.add(graph.node(edge.source).label)
        targets.add(graph.node(edge.target).label)
        props.update(edge.properties)
    rel_types = [
        RelTypeInfo(
            rel_type=rel_type,
            source_labels=tuple(sorted(sources)),
            target_labels=tuple(sorted(targets)),
            property_names=tuple(sorted(props)),
        )
        for rel_type, (sources, targets, props) in sorted(grouped.items())
    ]

    if relation_descriptions is None:
        relation_descriptions = dict(graph.relation_descriptions)
    if parent_child is None:
        parent_child = {
            child: rule if isinstance(rule, ParentRule) else ParentRule(str(rule))
            for child, rule in graph.parent_child.items()
        }
    return GraphSchema(
        node_types=tuple(node_types),
        rel_types=tuple(rel_types),
        rel_descriptions=relation_descriptions,
        parent_child=parent_child,
    )


def render_schema_text(schema: GraphSchema, include_descriptions: bool = True) -> str:
    """Deterministic text rendering used inside prompts."""
    lines = ["Node types:"]
    if schema.node_types:
        for info in schema.node_types:
            props = ", ".join(info.property_names)
            lines.append(f"  (:{info.label}) properties: {props}" if props else f"  (:{info.label})")
    else:
        lines.append("  (none)")
    lines.append("Relationship types:")
    if schema.rel_types:
        for info in schema.rel_types:
            for source in info.source_labels:
                for target in info.target_labels:
                    line = f"  (:{source})-[:{info.rel_type}]->(:{target})"
                    if info.property_names:
                        line += " properties: " + ", ".join(info.property_names)
                    lines.append(line)
    else:
        lines.append("  (none)")
    if include_descriptions and schema.rel_descriptions:
        lines.append(render_descriptions_text(schema))
    return "\n".join(lines)


def render_descriptions_text(schema: GraphSchema) -> str:
    if not schema.rel_descriptions:
        return ""
    lines = ["Relationship descriptions:"]
    for rel_type in sorted(schema.rel_descriptions):
        lines.append(f"  {rel_type}: {schema.rel_descriptions[rel_type]}")
    return "\n".join(lines)


def load_parent_child_file(source) -> dict[str, ParentRule]:
    """Read child/parent mappings: ``child<TAB>parent[<TAB>kind]`` per line,
    kind defaulting to ``name``."""
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = list(source)
    mapping: dict[str, ParentRule] = {}
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [part.strip() for part in stripped.split("\t")]
        if len(parts) not in (2, 3):
            raise IngestError(f"parent/child line {number} is malformed: {line!r}")
        kind = parts[2] if len(parts) == 3 else "name"
        if kind not in ("name", "label"):
            raise IngestError(f"parent/child line {number} has unknown kind {kind!r}")
        mapping[parts[0].lower()] = ParentRule(parent=parts[1].lower(), kind=kind)
    return mapping
