"""Preprocessor chain: each step alone, the assembled chain, and the change
log's replay guarantee."""

import io

import pytest

from corpus import QUERIES
from graphqa.graph import IngestError
from graphqa.preprocess import (
    CompositeSynonymProvider,
    DeprecationRule,
    PreprocessError,
    PreprocessorStep,
    StaticSynonymProvider,
    apply_chain,
    load_deprecation_rules,
    load_synonym_file,
    replay,
)

CHAIN_ALL = None  # default chain


def run(text, graph, **kwargs):
    return apply_chain(text, graph, **kwargs)


# -- deprecated constructs -------------------------------------------------


def test_size_call_rewritten_to_count_subquery(fixture_graph):
    result = run(
        "MATCH (d:drug) WHERE SIZE((d)-[:indication]->()) > 1 RETURN d.name",
        fixture_graph,
    )
    assert "COUNT { (d)-[:indication]->() } > 1" in result.text
    assert result.log.entries[0].step == "deprecated"
    assert result.log.entries[0].before.startswith("SIZE(")


def test_size_rewrite_handles_two_occurrences(fixture_graph):
    result = run(
        "MATCH (d:drug) WHERE SIZE((d)-[:indication]->()) > SIZE((d)-[:side_effect]->()) "
        "RETURN d.name",
        fixture_graph,
    )
    steps = [entry.step for entry in result.log.entries]
    assert steps.count("deprecated") == 2
    assert "SIZE" not in result.text


def test_non_converging_rule_reported(fixture_graph):
    looping = (DeprecationRule(pattern=r"XX", replacement="XXX"),)
    with pytest.raises(PreprocessError, match="did not converge"):
        run(
            'MATCH (a {name: "XX"}) RETURN a',
            fixture_graph,
            deprecation_rules=looping,
        )


def test_unparseable_query_raises_with_cause(fixture_graph):
    with pytest.raises(PreprocessError, match="does not parse") as excinfo:
        run("MATCH (a RETURN a", fixture_graph)
    assert excinfo.value.cause is not None


# -- formatting ------------------------------------------------------------


def test_format_step_logged_once(fixture_graph):
    result = run("match (a:drug) return a.name", fixture_graph)
    assert result.text == "MATCH (a:drug)\nRETURN a.name"
    assert [entry.step for entry in result.log.entries] == ["format"]


def test_canonical_text_produces_empty_log(fixture_graph):
    result = run("MATCH (a:drug)\nRETURN a.name", fixture_graph)
    assert result.log.entries == []
    assert result.log.notes == []


def test_format_step_cannot_be_disabled(fixture_graph):
    steps = (
        PreprocessorStep("deprecated"),
        PreprocessorStep("format", enabled=False),
        PreprocessorStep("lowercase_values"),
        PreprocessorStep("synonyms"),
        PreprocessorStep("child_to_parent"),
    )
    with pytest.raises(PreprocessError, match="format step cannot be disabled"):
        run("MATCH (a) RETURN a", fixture_graph, steps=steps)


def test_unknown_step_name_rejected(fixture_graph):
    with pytest.raises(PreprocessError, match="unknown step names"):
        run("MATCH (a) RETURN a", fixture_graph, steps=(PreprocessorStep("format"), PreprocessorStep("mystery")))


def test_duplicate_step_name_rejected(fixture_graph):
    with pytest.raises(PreprocessError, match="unique"):
        run(
            "MATCH (a) RETURN a",
            fixture_graph,
            steps=(PreprocessorStep("format"), PreprocessorStep("format")),
        )


# -- lowercase_values --------------------------------------------------------


def test_lowercases_values_not_structure(fixture_graph):
    result = run('MATCH (g:gene_or_protein {name: "PINK1"}) RETURN g.name', fixture_graph)
    assert '{name: "pink1"}' in result.text
    assert "gene_or_protein" in result.text
    assert "MATCH" in result.text
    entries = [e for e in result.log.entries if e.step == "lowercase_values"]
    # The log trims the shared trailing "1", keeping the minimal fragment.
    assert len(entries) == 1 and entries[0].before == "PINK" and entries[0].after == "pink"


def test_lowercase_applies_to_where_comparisons(fixture_graph):
    result = run('MATCH (g:gene_or_protein) WHERE g.name = "PINK1" RETURN g', fixture_graph)
    assert 'g.name = "pink1"' in result.text


def test_lowercase_step_can_be_disabled(fixture_graph):
    steps = tuple(
        PreprocessorStep(name, enabled=(name != "lowercase_values"))
        for name in ("deprecated", "format", "lowercase_values", "synonyms", "child_to_parent")
    )
    result = run('MATCH (g {name: "PINK1"}) RETURN g', fixture_graph, steps=steps)
    assert '"PINK1"' in result.text


# -- synonyms ----------------------------------------------------------------


def test_synonym_replaces_value_missing_from_graph(fixture_graph):
    provider = StaticSynonymProvider({"alcohol": "ethanol"})
    result = run(
        'MATCH (c:drug {name: "alcohol"})-[:target]->(g) RETURN g.name',
        fixture_graph,
        synonyms=provider,
    )
    assert '{name: "ethanol"}' in result.text
    entries = [e for e in result.log.entries if e.step == "synonyms"]
    # Minimal fragment: both words end in "ol", which the diff trims.
    assert entries and entries[0].before == "alcoh" and entries[0].after == "ethan"


def test_value_already_in_graph_left_alone(fixture_graph):
    provider = StaticSynonymProvider({"ethanol": "something_else"})
    result = run('MATCH (c:drug {name: "ethanol"}) RETURN c', fixture_graph, synonyms=provider)
    assert '{name: "ethanol"}' in result.text
    assert not [e for e in result.log.entries if e.step == "synonyms"]


def test_candidate_must_exist_in_graph(fixture_graph):
    provider = StaticSynonymProvider({"zzz": ["not_in_graph", "ethanol"]})
    result = run('MATCH (c:drug {name: "zzz"}) RETURN c', fixture_graph, synonyms=provider)
    assert '{name: "ethanol"}' in result.text


def test_miss_note_format_with_label(fixture_graph):
    result = run('MATCH (c:drug {name: "mystery"})\nRETURN c', fixture_graph)
    assert result.log.notes == ['synonyms: no mapping found for "mystery" (drug.name)']
    assert result.log.entries == []


def test_miss_note_format_without_label(fixture_graph):
    result = run('MATCH (c) WHERE c.name = "mystery" RETURN c', fixture_graph)
    assert result.log.notes == ['synonyms: no mapping found for "mystery" (name)']


def test_only_name_values_consulted(fixture_graph):
    # id is not a name slot, so no synonym lookup and no note.
    result = run('MATCH (c:drug {id: "zzz"}) RETURN c', fixture_graph)
    assert result.log.notes == []


def test_synonym_lookup_respects_pattern_label(fixture_graph):
    # "parkinson's disease" exists on disease nodes only after preferred-term
    # normalization; a drug-labeled pattern cannot borrow it.
    provider = StaticSynonymProvider({"pd": "parkinson disease"})
    result = run('MATCH (c:drug {name: "pd"}) RETURN c', fixture_graph, synonyms=provider)
    assert '"pd"' in result.text
    assert result.log.notes == ['synonyms: no mapping found for "pd" (drug.name)']
    fixed = run('MATCH (d:disease {name: "pd"}) RETURN d', fixture_graph, synonyms=provider)
    assert '{name: "parkinson disease"}' in fixed.text


def test_static_provider_case_insensitive():
    provider = StaticSynonymProvider({"Alcohol": "Ethanol"})
    assert provider.lookup("ALCOHOL") == ["ethanol"]
    assert provider.lookup("missing") == []


def test_composite_provider_orders_and_deduplicates():
    first = StaticSynonymProvider({"t": ["a", "b"]})
    second = StaticSynonymProvider({"t": ["b", "c"]})
    combined = CompositeSynonymProvider([first, second])
    assert combined.lookup("t") == ["a", "b", "c"]


def test_load_synonym_file_accumulates_candidates():
    provider = load_synonym_file(
        io.StringIO("# comment\nalcohol\tethanol\nalcohol\tspirits\n")
    )
    assert provider.lookup("alcohol") == ["ethanol", "spirits"]


def test_load_synonym_file_rejects_malformed_line():
    with pytest.raises(IngestError, match="line 2"):
        load_synonym_file(io.StringIO("a\tb\nnotabs\n"))


# -- child_to_parent ---------------------------------------------------------


def test_child_name_replaced_by_parent(fixture_graph):
    result = run(
        'MATCH (d:disease {name: "juvenile parkinson disease"}) RETURN d.name',
        fixture_graph,
    )
    assert '{name: "parkinson disease"}' in result.text
    entries = [e for e in result.log.entries if e.step == "child_to_parent"]
    assert len(entries) == 1


def test_child_label_replaced_by_parent_label(fixture_graph):
    result = run('MATCH (p:polypeptide {name: "pink1"}) RETURN p', fixture_graph)
    assert "(p:gene_or_protein" in result.text


def test_child_mapping_applied_inside_subqueries(fixture_graph):
    result = run(
        "MATCH (c:drug) WHERE EXISTS { (c)-[:indication]->(d:polypeptide) } RETURN c",
        fixture_graph,
    )
    assert "(d:gene_or_protein)" in result.text


# -- the assembled chain -----------------------------------------------------


def test_steps_compose_on_one_query(fixture_graph):
    text = (
        'MATCH (c:drug) WHERE c.name = "Alcohol" '
        "AND SIZE((c)-[:target]->()) >= 1 RETURN c.name"
    )
    result = run(text, fixture_graph, synonyms=StaticSynonymProvider({"alcohol": "ethanol"}))
    assert 'c.name = "ethanol"' in result.text
    assert "COUNT { (c)-[:target]->() } >= 1" in result.text
    steps = [entry.step for entry in result.log.entries]
    assert steps == ["deprecated", "format", "lowercase_values", "synonyms"]


def test_replay_reproduces_output(fixture_graph):
    text = 'match (G:gene_or_protein {name: "PINK1"})-[:associated_with]->(d) return d.name'
    result = run(text, fixture_graph)
    assert replay(text, result.log.entries) == result.text


def test_replay_rejects_diverged_log(fixture_graph):
    result = run("match (a) return a", fixture_graph)
    with pytest.raises(ValueError, match="does not apply"):
        replay("MATCH (b) RETURN b", result.log.entries)


@pytest.mark.parametrize("text", QUERIES)
def test_chain_is_idempotent_over_corpus(fixture_graph, text):
    once = run(text, fixture_graph)
    twice = run(once.text, fixture_graph)
    assert twice.text == once.text
    assert twice.log.entries == []


@pytest.mark.parametrize("text", QUERIES)
def test_replay_is_faithful_over_corpus(fixture_graph, text):
    result = run(text, fixture_graph)
    assert replay(text, result.log.entries) == result.text


def test_load_deprecation_rules_validates():
    rules = load_deprecation_rules(io.StringIO("# note\nfoo\tbar\n"))
    assert rules == (DeprecationRule(pattern="foo", replacement="bar"),)
    with pytest.raises(IngestError, match="line 1"):
        load_deprecation_rules(io.StringIO("no-tab-here\n"))
    with pytest.raises(IngestError, match="line 1"):
        load_deprecation_rules(io.StringIO("((broken\tx\n"))
