"""Mention extraction, question rewriting, and enhancement sentences."""

import io

import pytest

from graphqa.entities import (
    ENHANCEMENT_TEMPLATE,
    EntityMention,
    Vocabulary,
    enhancement_sentences,
    extract,
    load_vocabulary_file,
    rewrite_question,
    vocabulary_from_graph,
)
from graphqa.graph import IngestError


@pytest.fixture()
def vocab():
    return Vocabulary(
        {
            "hypertension": ("hypertension", "disease"),
            "ocular hypertension": ("ocular hypertension", "disease"),
            "alcohol": ("ethanol", "drug"),
            "pd": ("parkinson disease", "disease"),
            "pink1": ("pink1", "gene_or_protein"),
        }
    )


def test_longest_surface_wins(vocab):
    mentions = extract("What treats ocular hypertension?", vocab)
    assert [m.surface for m in mentions] == ["ocular hypertension"]
    assert mentions[0].preferred_term == "ocular hypertension"


def test_matching_is_case_insensitive_and_keeps_original_surface(vocab):
    mentions = extract("Does ALCOHOL help?", vocab)
    assert [m.surface for m in mentions] == ["ALCOHOL"]
    assert mentions[0].preferred_term == "ethanol"


def test_word_boundaries_prevent_substring_hits(vocab):
    assert extract("Is pdq a gene?", vocab) == []
    assert extract("methylpd is unrelated", vocab) == []


def test_hyphen_is_word_internal(vocab):
    # "pd-1" must not produce a "pd" mention: the hyphen continues the word.
    assert extract("Tell me about pd-1 signaling.", vocab) == []


def test_mentions_carry_offsets(vocab):
    question = "Is alcohol linked to hypertension?"
    mentions = extract(question, vocab)
    assert [(m.start, m.end) for m in mentions] == [(3, 10), (21, 33)]
    assert [question[m.start : m.end] for m in mentions] == ["alcohol", "hypertension"]


def test_punctuation_terminates_words(vocab):
    mentions = extract("alcohol, hypertension.", vocab)
    assert [m.surface for m in mentions] == ["alcohol", "hypertension"]


def test_rewrite_replaces_right_to_left(vocab):
    question = "Does alcohol cause hypertension or does hypertension cause alcohol use?"
    mentions = extract(question, vocab)
    rewritten = rewrite_question(question, mentions)
    assert rewritten == "Does ethanol cause hypertension or does hypertension cause ethanol use?"


def test_rewrite_with_shorter_replacement_keeps_other_spans(vocab):
    question = "Is pd worse than ocular hypertension?"
    rewritten = rewrite_question(question, extract(question, vocab))
    assert rewritten == "Is parkinson disease worse than ocular hypertension?"


def test_rewrite_rejects_overlapping_mentions():
    a = EntityMention("ab", 0, 2, "x", "c")
    b = EntityMention("bc", 1, 3, "y", "c")
    with pytest.raises(ValueError, match="overlapping mentions"):
        rewrite_question("abc", [a, b])


def test_rewrite_without_mentions_is_identity(vocab):
    assert rewrite_question("nothing known here", []) == "nothing known here"


def test_enhancement_sentence_template(vocab):
    mentions = extract("Does alcohol interact with pink1?", vocab)
    assert enhancement_sentences(mentions) == [
        '"ethanol" is of type "drug" in the knowledge graph.',
        '"pink1" is of type "gene_or_protein" in the knowledge graph.',
    ]


def test_enhancement_sentences_deduplicate(vocab):
    mentions = extract("alcohol or alcohol or pd", vocab)
    sentences = enhancement_sentences(mentions)
    assert len(sentences) == 2
    assert sentences[0] == ENHANCEMENT_TEMPLATE.format(term="ethanol", category="drug")


def test_vocabulary_rejects_duplicate_surfaces():
    with pytest.raises(IngestError, match="duplicate vocabulary surface"):
        Vocabulary({"PD": ("a", "b"), "pd": ("c", "d")})


def test_vocabulary_lookup_is_case_insensitive(vocab):
    entry = vocab.get("ALCOHOL")
    assert entry is not None and entry.preferred_term == "ethanol"
    assert "Alcohol" in vocab
    assert len(vocab) == 5


def test_surfaces_longest_first_ties_alphabetical():
    vocab = Vocabulary({"bb": ("x", "c"), "aa": ("y", "c"), "ccc": ("z", "c")})
    assert vocab.surfaces_longest_first() == ["ccc", "aa", "bb"]


def test_load_vocabulary_file():
    vocab = load_vocabulary_file(
        io.StringIO("# surface\tpreferred\tcategory\nAlcohol\tethanol\tdrug\n")
    )
    assert vocab.get("alcohol").category == "drug"


def test_load_vocabulary_file_rejects_bad_lines():
    with pytest.raises(IngestError, match="line 1 is malformed"):
        load_vocabulary_file(io.StringIO("only\ttwo\n"))
    with pytest.raises(IngestError, match="repeats surface form"):
        load_vocabulary_file(io.StringIO("a\tx\tc\nA\ty\tc\n"))


def test_vocabulary_from_graph(fixture_graph):
    vocab = vocabulary_from_graph(fixture_graph)
    assert vocab.get("pink1").category == "gene_or_protein"
    assert vocab.get("parkinson disease").category == "disease"
    mentions = extract("Which diseases are associated with pink1?", vocab)
    assert [m.preferred_term for m in mentions] == ["pink1"]


def test_fixture_vocabulary_covers_common_aliases(fixtures_dir):
    vocab = load_vocabulary_file(fixtures_dir / "vocabulary.tsv")
    assert vocab.get("alcohol").preferred_term == "ethanol"
    assert vocab.get("parkinson's disease").preferred_term == "parkinson disease"
