from .ingest import IngestError, dump_kv_file, ingest, load_kv_file
from .model import GraphEdge, GraphNode, PropertyGraph
from .schema import (
    GraphSchema,
    NodeTypeInfo,
    ParentRule,
    RelTypeInfo,
    extract_schema,
    load_parent_child_file,
    render_descriptions_text,
    render_schema_text,
)

__all__ = [
    "GraphEdge",
    "GraphNode",
    "GraphSchema",
    "IngestError",
    "NodeTypeInfo",
    "ParentRule",
    "PropertyGraph",
    "RelTypeInfo",
    "dump_kv_file",
    "extract_schema",
    "ingest",
    "load_kv_file",
    "load_parent_child_file",
    "render_descriptions_text",
    "render_schema_text",
]
