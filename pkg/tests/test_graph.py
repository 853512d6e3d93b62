"""Graph construction, ingestion, membership indexes, and schema text."""

import io

import pytest

from graphqa.graph import (
    GraphEdge,
    GraphNode,
    IngestError,
    ParentRule,
    PropertyGraph,
    dump_kv_file,
    extract_schema,
    ingest,
    load_kv_file,
    load_parent_child_file,
    render_descriptions_text,
    render_schema_text,
)

NODES = """id\tlabel\tname
a1\tdrug\tTimolol
a2\tdisease\tOcular Hypertension
"""
EDGES = """source\ttarget\trel_type
a1\ta2\tindication
"""


def test_ingest_lowercases_every_property_value():
    graph = ingest(io.StringIO(NODES), io.StringIO(EDGES))
    node = graph.node("a1")
    assert node.properties["name"] == "timolol"
    assert node.properties["id"] == "a1"
    assert graph.node("a2").properties["name"] == "ocular hypertension"


def test_ingest_keeps_labels_untouched():
    graph = ingest(io.StringIO(NODES), io.StringIO(EDGES))
    assert graph.node("a1").label == "drug"


def test_ingest_applies_preferred_terms_to_names():
    graph = ingest(
        io.StringIO(NODES),
        io.StringIO(EDGES),
        preferred_terms={"timolol": "timolol maleate"},
    )
    assert graph.node("a1").properties["name"] == "timolol maleate"


def test_ingest_rejects_duplicate_node_id():
    nodes = NODES + "a1\tdrug\tagain\n"
    with pytest.raises(IngestError, match="repeats node id"):
        ingest(io.StringIO(nodes), io.StringIO(EDGES))


def test_ingest_rejects_edge_to_unknown_node():
    edges = EDGES + "a1\tmissing\tindication\n"
    with pytest.raises(IngestError, match="never ingested"):
        ingest(io.StringIO(NODES), io.StringIO(edges))


def test_ingest_rejects_missing_required_column():
    with pytest.raises(IngestError, match="missing required column"):
        ingest(io.StringIO("id\tname\nx\ty\n"), io.StringIO(EDGES))


def test_ingest_names_row_with_empty_required_value():
    nodes = NODES + "a3\t\tno label\n"
    with pytest.raises(IngestError, match="node row 3"):
        ingest(io.StringIO(nodes), io.StringIO(EDGES))


def test_comma_delimiter_detected_from_header():
    nodes = "id,label,name\nb1,drug,aspirin\n"
    edges = "source,target,rel_type\n"
    with pytest.raises(IngestError, match="empty table"):
        ingest(io.StringIO(nodes), io.StringIO(""))
    graph = ingest(io.StringIO(nodes), io.StringIO(edges + "b1,b1,self\n"))
    assert graph.node("b1").properties["name"] == "aspirin"


def test_has_property_value_index():
    graph = ingest(io.StringIO(NODES), io.StringIO(EDGES))
    assert graph.has_property_value("drug", "name", "timolol")
    assert graph.has_property_value(None, "name", "timolol")
    assert not graph.has_property_value("disease", "name", "timolol")
    assert not graph.has_property_value(None, "name", "aspirin")


def test_adjacency_indexes():
    graph = ingest(io.StringIO(NODES), io.StringIO(EDGES))
    out = graph.outgoing("a1")
    assert [e.rel_type for e in out] == ["indication"]
    into = graph.incoming("a2")
    assert [e.source for e in into] == ["a1"]
    assert graph.outgoing("a2") == ()


def test_graph_is_immutable():
    graph = ingest(io.StringIO(NODES), io.StringIO(EDGES))
    node = graph.node("a1")
    with pytest.raises(TypeError):
        node.properties["name"] = "other"


def test_parallel_edges_are_distinct():
    edges = EDGES + "a1\ta2\tindication\n"
    graph = ingest(io.StringIO(NODES), io.StringIO(edges))
    assert graph.edge_count == 2
    first, second = graph.outgoing("a1")
    assert first != second


def test_node_equality_is_by_id_and_label():
    a = GraphNode(id="x", label="drug", properties={"name": "one"})
    b = GraphNode(id="x", label="drug", properties={"name": "two"})
    assert a == b
    assert hash(a) == hash(b)


def test_schema_extraction_collects_labels_and_rel_endpoints():
    graph = ingest(io.StringIO(NODES), io.StringIO(EDGES))
    schema = extract_schema(graph)
    labels = {info.label for info in schema.node_types}
    assert labels == {"drug", "disease"}
    (rel,) = schema.rel_types
    assert rel.rel_type == "indication"
    assert rel.source_labels == ("drug",)
    assert rel.target_labels == ("disease",)


def test_schema_text_lists_patterns_and_descriptions():
    graph = ingest(
        io.StringIO(NODES),
        io.StringIO(EDGES),
        relation_descriptions={"indication": "drug approved to treat disease"},
    )
    schema = extract_schema(graph)
    text = render_schema_text(schema)
    assert "(:drug)-[:indication]->(:disease)" in text
    assert "drug approved to treat disease" in text
    bare = render_schema_text(schema, include_descriptions=False)
    assert "approved to treat" not in bare
    assert "indication:" in render_descriptions_text(schema)


def test_parent_child_file_kinds():
    mapping = load_parent_child_file(
        ["child a\tparent a", "childlabel\tparentlabel\tlabel"]
    )
    assert mapping["child a"] == ParentRule(parent="parent a", kind="name")
    assert mapping["childlabel"].kind == "label"
    with pytest.raises(IngestError, match="unknown kind"):
        load_parent_child_file(["a\tb\tweird"])


def test_kv_file_round_trip(tmp_path):
    mapping = {"ppi": "protein interaction", "indication": "approved use"}
    path = tmp_path / "kv.tsv"
    dump_kv_file(mapping, path)
    assert load_kv_file(path) == mapping


def test_fixture_graph_shape(fixture_graph):
    assert fixture_graph.node_count == 15
    assert fixture_graph.edge_count == 20
    assert fixture_graph.node("d1").properties["name"] == "parkinson disease"
    assert fixture_graph.parent_child["polypeptide"].kind == "label"
