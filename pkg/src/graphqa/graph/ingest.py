"""Build a :class:`PropertyGraph` from delimiter-separated tabular files.

Node files carry the columns ``id``, ``label``, ``name`` plus any number of
extra property columns; edge files carry ``source``, ``target``, ``rel_type``
plus extras. Every property value (ids included) is lowercased on the way in,
and an optional preferred-term map rewrites raw names to their canonical form
before the graph is built.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import IO, Iterable, Mapping

from .model import GraphEdge, GraphNode, PropertyGraph

NODE_REQUIRED = ("id", "label", "name")
EDGE_REQUIRED = ("source", "target", "rel_type")


class IngestError(ValueError):
    """Malformed ingestion input; the message names the offending row or file."""


def _open_rows(source, delimiter: str | None) -> tuple[list[str], list[list[str]]]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = "\n".join(source)
    if delimiter is None:
        first_line = text.splitlines()[0] if text.strip() else ""
        delimiter = "\t" if "\t" in first_line else ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise IngestError("empty table: no header row found")
    header = [cell.strip() for cell in rows[0]]
    return header, rows[1:]


def _check_header(header: list[str], required: tuple[str, ...], kind: str) -> None:
    for column in required:
        if column not in header:
            raise IngestError(f"{kind} file is missing required column {column!r}")


def _row_map(header: list[str], row: list[str], kind: str, number: int) -> dict[str, str]:
    if len(row) > len(header):
        raise IngestError(f"{kind} row {number} has more cells than the header")
    padded = row + [""] * (len(header) - len(row))
    return {column: cell.strip() for column, cell in zip(header, padded)}


def ingest(
    nodes_source,
    edges_source,
    *,
    relation_descriptions: Mapping[str, str] | None = None,
    parent_child: Mapping[str, object] | None = None,
    preferred_terms: Mapping[str, str] | None = None,
    delimiter: str | None = None,
) -> PropertyGraph:
    """Read node and edge tables and assemble the graph.

    Raises :class:`IngestError` for a missing required column, an empty
    required value (named by row number, counting data rows from 1), a
    duplicate node id, or an edge referencing an unknown node.
    """
    preferred = {k.lower(): v.lower() for k, v in (preferred_terms or {}).items()}

    header, rows = _open_rows(nodes_source, delimiter)
    _check_header(header, NODE_REQUIRED, "node")
    nodes: list[GraphNode] = []
    seen: set[str] = set()
    for number, raw in enumerate(rows, start=1):
        record = _row_map(header, raw, "node", number)
        for column in NODE_REQUIRED:
            if not record[column]:
                raise IngestError(f"node row {number} is missing required column {column!r}")
        properties = {key: value.lower() for key, value in record.items() if key != "label"}
        name = properties["name"]
        properties["name"] = preferred.get(name, name)
        node = GraphNode(id=properties["id"], label=record["label"], properties=properties)
        if node.id in seen:
            raise IngestError(f"node row {number} repeats node id {node.id!r}")
        seen.add(node.id)
        nodes.append(node)

    header, rows = _open_rows(edges_source, delimiter)
    _check_header(header, EDGE_REQUIRED, "edge")
    edges: list[GraphEdge] = []
    for number, raw in enumerate(rows, start=1):
        record = _row_map(header, raw, "edge", number)
        for column in EDGE_REQUIRED:
            if not record[column]:
                raise IngestError(f"edge row {number} is missing required column {column!r}")
        source = record["source"].lower()
        target = record["target"].lower()
        if source not in seen or target not in seen:
            raise IngestError(
                f"edge row {number} ({source})-[:{record['rel_type']}]->({target}) "
                "references a node that was never ingested"
            )
        extras = {
            key: value.lower()
            for key, value in record.items()
            if key not in EDGE_REQUIRED
        }
        edges.append(
            GraphEdge(
                source=source,
                target=target,
                rel_type=record["rel_type"],
                properties=extras,
                index=number - 1,
            )
        )

    return PropertyGraph(
        nodes,
        edges,
        relation_descriptions=relation_descriptions,
        parent_child=parent_child,
    )


def load_kv_file(source) -> dict[str, str]:
    """Read a two-column key/value text file (tab separated, one mapping per
    line, ``#`` comments and blank lines skipped)."""
    if isinstance(source, (str, Path)):
        lines: Iterable[str] = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = source
    mapping: dict[str, str] = {}
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" not in stripped:
            raise IngestError(f"line {number} is not a tab-separated key/value pair: {line!r}")
        key, value = stripped.split("\t", 1)
        mapping[key.strip()] = value.strip()
    return mapping


def dump_kv_file(mapping: Mapping[str, str], target: str | Path | IO[str]) -> None:
    """Inverse of :func:`load_kv_file`; ``load(dump(m)) == m``."""
    text = "".join(f"{key}\t{value}\n" for key, value in mapping.items())
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
