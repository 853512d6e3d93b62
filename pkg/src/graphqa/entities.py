"""Dictionary-based entity mention extraction and question enrichment.

Mentions are found by scanning the question left to right and taking the
longest vocabulary surface form that matches at each position, so "ocular
hypertension" wins over "hypertension". Matching is case-insensitive and
respects word boundaries; hyphens count as word-internal characters because
biomedical names contain them.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .graph.ingest import IngestError
from .graph.model import PropertyGraph

ENHANCEMENT_TEMPLATE = '"{term}" is of type "{category}" in the knowledge graph.'


@dataclass(frozen=True)
class VocabularyEntry:
    preferred_term: str
    category: str


class Vocabulary:
    """Surface form -> (preferred term, category). Surface forms are unique
    and stored lowercase."""

    def __init__(self, entries: Mapping[str, VocabularyEntry | tuple[str, str]]):
        self._entries: dict[str, VocabularyEntry] = {}
        for surface, entry in entries.items():
            if not isinstance(entry, VocabularyEntry):
                entry = VocabularyEntry(*entry)
            key = surface.lower()
            if key in self._entries:
                raise IngestError(f"duplicate vocabulary surface form: {surface!r}")
            self._entries[key] = VocabularyEntry(
                entry.preferred_term.lower(), entry.category.lower()
            )
        self._by_length = sorted(self._entries, key=lambda s: (-len(s), s))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface.lower() in self._entries

    def get(self, surface: str) -> VocabularyEntry | None:
        return self._entries.get(surface.lower())

    def surfaces_longest_first(self) -> list[str]:
        return list(self._by_length)


@dataclass(frozen=True)
class EntityMention:
    surface: str
    start: int
    end: int
    preferred_term: str
    category: str


def _is_word_char(char: str) -> bool:
    return char.isalnum() or char == "-"


def extract(question: str, vocab: Vocabulary) -> list[EntityMention]:
    """Non-overlapping mentions in offset order. Deterministic: ties between
    equal-length surfaces cannot arise because surface forms are unique."""
    lowered = question.lower()
    surfaces = vocab.surfaces_longest_first()
    mentions: list[EntityMention] = []
    position = 0
    while position < len(lowered):
        if position > 0 and _is_word_char(lowered[position - 1]):
            position += 1
            continue
        hit = None
        for surface in surfaces:
            end = position + len(surface)
            if lowered.startswith(surface, position):
                if end == len(lowered) or not _is_word_char(lowered[end]):
                    hit = (surface, end)
                    break
        if hit is None:
            position += 1
            continue
        surface, end = hit
        entry = vocab.get(surface)
        mentions.append(
            EntityMention(
                surface=question[position:end],
                start=position,
                end=end,
                preferred_term=entry.preferred_term,
                category=entry.category,
            )
        )
        position = end
    return mentions


def rewrite_question(question: str, mentions: Iterable[EntityMention]) -> str:
    """Replace each mention span with its preferred term. Spans must not
    overlap; replacement runs right to left so earlier offsets stay valid."""
    ordered = sorted(mentions, key=lambda m: m.start)
    for previous, current in zip(ordered, ordered[1:]):
        if current.start < previous.end:
            raise ValueError(
                f"overlapping mentions: [{previous.start}, {previous.end}) and "
                f"[{current.start}, {current.end})"
            )
    for mention in reversed(ordered):
        question = (
            question[: mention.start] + mention.preferred_term + question[mention.end :]
        )
    return question


def enhancement_sentences(mentions: Iterable[EntityMention]) -> list[str]:
    """One sentence per distinct (preferred term, category), in first-mention
    order."""
    seen: set[tuple[str, str]] = set()
    sentences: list[str] = []
    for mention in mentions:
        key = (mention.preferred_term, mention.category)
        if key in seen:
            continue
        seen.add(key)
        sentences.append(
            ENHANCEMENT_TEMPLATE.format(term=mention.preferred_term, category=mention.category)
        )
    return sentences


def load_vocabulary_file(source) -> Vocabulary:
    """Read ``surface<TAB>preferred<TAB>category`` lines (# starts a
    comment)."""
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = list(source)
    entries: dict[str, tuple[str, str]] = {}
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [part.strip() for part in stripped.split("\t")]
        if len(parts) != 3 or not all(parts):
            raise IngestError(f"vocabulary line {number} is malformed: {line!r}")
        surface = parts[0].lower()
        if surface in entries:
            raise IngestError(f"vocabulary line {number} repeats surface form {parts[0]!r}")
        entries[surface] = (parts[1], parts[2])
    return Vocabulary(entries)


def vocabulary_from_graph(graph: PropertyGraph) -> Vocabulary:
    """Vocabulary whose surface forms are the node names already in the
    graph, each mapping to itself. Names shared across nodes keep the first
    label in node-id order."""
    entries: dict[str, tuple[str, str]] = {}
    for node in graph.nodes():
        name = node.properties.get("name")
        if name:
            entries.setdefault(name, (name, node.label))
    return Vocabulary(entries)
