"""The assembled question-answering pipeline against the fixture graph and a
scripted backend."""

import pytest

from graphqa.cypher import parse
from graphqa.entities import Vocabulary
from graphqa.llm import ScriptedBackend
from graphqa.pipeline import Pipeline, PipelineOptions, PIPELINE_KINDS, SUBGRAPH_MODES

PINK1_QUESTION = "Which diseases are associated with pink1?"
PINK1_QUERY = (
    'MATCH (g:gene_or_protein {name: "pink1"})-[:associated_with]->(d:disease)\n'
    "RETURN d.name"
)


def scripted_pipeline(fixture_graph, rules=None, queue=None, default=None, **kwargs):
    backend = ScriptedBackend(rules=rules, queue=queue, default=default)
    return Pipeline(fixture_graph, backend, **kwargs), backend


@pytest.fixture()
def pink1_pipeline(fixture_graph):
    rules = [
        {
            "contains": ["Graph schema:", PINK1_QUESTION],
            "response": PINK1_QUERY,
        },
        {
            "contains": ["Rows:", "parkinson disease"],
            "response": "pink1 is associated with parkinson disease and leigh syndrome.",
        },
    ]
    pipeline, backend = scripted_pipeline(fixture_graph, rules=rules)
    return pipeline, backend


def test_answered_response_carries_full_evidence(pink1_pipeline):
    pipeline, _ = pink1_pipeline
    response = pipeline.answer(PINK1_QUESTION)
    assert response.status == "answered"
    assert response.answer == "pink1 is associated with parkinson disease and leigh syndrome."
    evidence = response.evidence
    assert evidence.generated_cypher == PINK1_QUERY
    assert evidence.preprocessed_cypher == PINK1_QUERY
    assert evidence.change_log is not None and evidence.change_log.entries == []
    assert sorted(row[0] for row in evidence.graph_rows.rows) == [
        "leigh syndrome",
        "parkinson disease",
    ]
    assert {node.properties["name"] for node in evidence.subgraph.nodes} == {
        "pink1",
        "parkinson disease",
        "leigh syndrome",
    }
    assert len(evidence.subgraph.edges) == 2
    assert [bundle.purpose for bundle in evidence.prompts] == ["cypher_gen", "verbalize"]


def test_timings_cover_stages(pink1_pipeline):
    pipeline, _ = pink1_pipeline
    response = pipeline.answer(PINK1_QUESTION)
    for stage in ("entities", "generate", "preprocess", "execute", "subgraph", "verbalize"):
        assert stage in response.timings
        assert response.timings[stage] >= 0


def test_verbalize_off_renders_rows(pink1_pipeline):
    pipeline, backend = pink1_pipeline
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(verbalize=False))
    assert response.status == "answered"
    assert response.answer.splitlines()[0] == "d.name"
    assert set(response.answer.splitlines()[1:]) == {"parkinson disease", "leigh syndrome"}
    # Only the generation call went out.
    assert len(backend.calls) == 1


def test_subgraph_off(pink1_pipeline):
    pipeline, _ = pink1_pipeline
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(subgraph_mode="off"))
    assert response.evidence.subgraph.nodes == []
    assert response.evidence.subgraph.edges == []


def test_schema_error_short_circuits(fixture_graph):
    pipeline, backend = scripted_pipeline(
        fixture_graph,
        default="SCHEMA_ERROR: the schema has no smell data",
    )
    response = pipeline.answer("What does pink1 smell like?")
    assert response.status == "schema_error"
    assert response.answer == "the schema has no smell data"
    assert response.evidence.schema_error is not None
    assert response.evidence.generated_cypher is None
    assert response.evidence.graph_rows.rows == []
    assert len(backend.calls) == 1


def test_parse_error_status(fixture_graph):
    pipeline, _ = scripted_pipeline(fixture_graph, default="MATCH (a RETURN a")
    response = pipeline.answer("anything")
    assert response.status == "parse_error"
    assert response.failed_stage == "preprocess"
    assert "does not parse" in response.answer
    assert response.evidence.preprocessed_cypher is None


def test_execution_error_is_parse_error_status(fixture_graph):
    pipeline, _ = scripted_pipeline(
        fixture_graph, default='MATCH (a) WHERE reverse(a.name) = "x" RETURN a.name'
    )
    response = pipeline.answer("anything")
    assert response.status == "parse_error"
    assert response.failed_stage == "execute"
    # The preprocessed text is still preserved as evidence.
    assert response.evidence.preprocessed_cypher is not None


def test_backend_error_at_generation(fixture_graph):
    pipeline, _ = scripted_pipeline(fixture_graph)  # no rules, queue, or default
    response = pipeline.answer("anything")
    assert response.status == "backend_error"
    assert response.failed_stage == "generate"


def test_backend_error_at_verbalization(fixture_graph):
    rules = [{"contains": ["Graph schema:"], "response": PINK1_QUERY}]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION)
    assert response.status == "backend_error"
    assert response.failed_stage == "verbalize"
    # Evidence gathered before the failure is intact.
    assert len(response.evidence.graph_rows.rows) == 2


def test_fenced_response_is_unwrapped(fixture_graph):
    rules = [
        {"contains": ["Graph schema:"], "response": f"```cypher\n{PINK1_QUERY}\n```"},
        {"contains": ["Rows:"], "response": "two diseases."},
    ]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION)
    assert response.status == "answered"
    assert response.evidence.generated_cypher == PINK1_QUERY


def test_preprocessing_repairs_generated_query(fixture_graph):
    sloppy = 'match (g:gene_or_protein {name:"PINK1"})-[:associated_with]->(d:disease) return d.name'
    rules = [
        {"contains": ["Graph schema:"], "response": sloppy},
        {"contains": ["Rows:"], "response": "ok."},
    ]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION)
    assert response.status == "answered"
    assert response.evidence.preprocessed_cypher == PINK1_QUERY
    steps = [entry.step for entry in response.evidence.change_log.entries]
    assert steps == ["format", "lowercase_values"]
    assert len(response.evidence.graph_rows.rows) == 2


def test_entity_enhancement_rewrites_question(fixture_graph):
    vocab = Vocabulary({"alcohol": ("ethanol", "drug")})
    rules = [
        {
            "contains": ["Graph schema:", "Which genes does ethanol target?"],
            "response": 'MATCH (c:drug {name: "ethanol"})-[:target]->(g:gene_or_protein)\nRETURN g.name',
        },
        {"contains": ["Rows:"], "response": "cyp2c9."},
    ]
    pipeline, backend = scripted_pipeline(fixture_graph, rules=rules, vocab=vocab)
    response = pipeline.answer("Which genes does alcohol target?")
    assert response.status == "answered"
    assert response.evidence.enhanced_question == "Which genes does ethanol target?"
    assert [m.preferred_term for m in response.evidence.entity_mentions] == ["ethanol"]
    system, user, _ = backend.calls[0]
    assert "These entities were recognized in the question:" in user
    assert '"ethanol" is of type "drug" in the knowledge graph.' in user
    assert "alcohol" not in user


def test_entity_enhancement_disabled(fixture_graph):
    vocab = Vocabulary({"alcohol": ("ethanol", "drug")})
    rules = [
        {
            "contains": ["Graph schema:", "Which genes does alcohol target?"],
            "response": 'MATCH (c:drug {name: "alcohol"})-[:target]->(g:gene_or_protein)\nRETURN g.name',
        },
        {"contains": ["Rows:"], "response": "cyp2c9."},
    ]
    pipeline, backend = scripted_pipeline(fixture_graph, rules=rules, vocab=vocab)
    response = pipeline.answer(
        "Which genes does alcohol target?", PipelineOptions(entity_enhancement=False)
    )
    assert response.status == "answered"
    assert response.evidence.enhanced_question is None
    assert response.evidence.entity_mentions == []
    _, user, _ = backend.calls[0]
    assert "These entities were recognized" not in user


def test_llm_only_path_never_touches_graph(fixture_graph):
    rules = [{"contains": ["Question:"], "response": "From general knowledge: two diseases."}]
    pipeline, backend = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(pipeline_kind="llm_only"))
    assert response.status == "answered"
    assert response.answer == "From general knowledge: two diseases."
    assert response.evidence.generated_cypher is None
    assert response.evidence.graph_rows.rows == []
    assert response.evidence.subgraph.nodes == []
    assert [bundle.purpose for bundle in response.evidence.prompts] == ["llm_only"]
    assert len(backend.calls) == 1


def test_llm_only_backend_error(fixture_graph):
    pipeline, _ = scripted_pipeline(fixture_graph)
    response = pipeline.answer("q", PipelineOptions(pipeline_kind="llm_only"))
    assert response.status == "backend_error"
    assert response.failed_stage == "llm_only"


def test_options_validate_kind_and_mode():
    with pytest.raises(ValueError, match="pipeline_kind"):
        PipelineOptions(pipeline_kind="mystery")
    with pytest.raises(ValueError, match="subgraph_mode"):
        PipelineOptions(subgraph_mode="sometimes")
    assert PIPELINE_KINDS == ("hybrid", "llm_only")
    assert SUBGRAPH_MODES == ("llm", "deterministic", "off")


def test_answer_with_query_skips_generation(fixture_graph):
    rules = [{"contains": ["Rows:"], "response": "replayed."}]
    pipeline, backend = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer_with_query(PINK1_QUESTION, PINK1_QUERY)
    assert response.status == "answered"
    assert response.answer == "replayed."
    assert response.evidence.generated_cypher == PINK1_QUERY
    assert len(response.evidence.graph_rows.rows) == 2
    # No generation prompt went out, only verbalization.
    assert len(backend.calls) == 1
    assert "Rows:" in backend.calls[0][1]


def test_llm_subgraph_mode_accepts_valid_rewrite(fixture_graph):
    rewrite = (
        'MATCH (g:gene_or_protein {name: "pink1"})-[a:associated_with]->(d:disease)\n'
        "RETURN g, d, a"
    )
    rules = [
        {"contains": ["Graph schema:"], "response": PINK1_QUERY},
        {"contains": ["Output:"], "response": rewrite},
        {"contains": ["Rows:"], "response": "ok."},
    ]
    pipeline, backend = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(subgraph_mode="llm"))
    assert response.status == "answered"
    assert {node.id for node in response.evidence.subgraph.nodes} == {"g1", "d1", "d2"}
    assert len(response.evidence.subgraph.edges) == 2
    purposes = [bundle.purpose for bundle in response.evidence.prompts]
    assert purposes == ["cypher_gen", "subgraph_gen", "verbalize"]


def test_llm_subgraph_mode_falls_back_on_bad_rewrite(fixture_graph):
    # The scripted rewrite returns a aggregation, which the validator rejects;
    # the deterministic rewrite must kick in and still produce the subgraph.
    rules = [
        {"contains": ["Graph schema:"], "response": PINK1_QUERY},
        {"contains": ["Output:"], "response": "MATCH (g)\nRETURN COUNT(g)"},
        {"contains": ["Rows:"], "response": "ok."},
    ]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(subgraph_mode="llm"))
    assert response.status == "answered"
    assert {node.id for node in response.evidence.subgraph.nodes} == {"g1", "d1", "d2"}


def test_llm_subgraph_mode_falls_back_on_changed_topology(fixture_graph):
    rules = [
        {"contains": ["Graph schema:"], "response": PINK1_QUERY},
        {"contains": ["Output:"], "response": "MATCH (g:drug)-[a:indication]->(d)\nRETURN g, d, a"},
        {"contains": ["Rows:"], "response": "ok."},
    ]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(subgraph_mode="llm"))
    assert {node.id for node in response.evidence.subgraph.nodes} == {"g1", "d1", "d2"}


def test_llm_subgraph_mode_falls_back_on_backend_error(fixture_graph):
    rules = [
        {"contains": ["Graph schema:"], "response": PINK1_QUERY},
        {"contains": ["Rows:"], "response": "ok."},
    ]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer(PINK1_QUESTION, PipelineOptions(subgraph_mode="llm"))
    assert response.status == "answered"
    assert {node.id for node in response.evidence.subgraph.nodes} == {"g1", "d1", "d2"}


def test_subgraph_includes_anonymous_endpoints(fixture_graph):
    pipeline, _ = scripted_pipeline(fixture_graph, default="unused")
    query = parse('MATCH (c:drug {name: "timolol"})-[:side_effect]->() RETURN c.name')
    subgraph = pipeline.build_subgraph(query, "deterministic")
    names = {node.properties["name"] for node in subgraph.nodes}
    assert names == {"timolol", "pterygium"}
    assert len(subgraph.edges) == 1


def test_empty_result_still_answered(fixture_graph):
    rules = [
        {"contains": ["Graph schema:"], "response": 'MATCH (c:drug {name: "nothing"})-[:indication]->(d)\nRETURN d.name'},
        {"contains": ["Rows:", "(no rows)"], "response": "I don't know."},
    ]
    pipeline, _ = scripted_pipeline(fixture_graph, rules=rules)
    response = pipeline.answer("What does nothing treat?")
    assert response.status == "answered"
    assert response.answer == "I don't know."
    assert response.evidence.graph_rows.rows == []
    assert response.evidence.subgraph.nodes == []
