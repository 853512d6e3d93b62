"""Prompt construction and response post-processing.

Templates are plain text files with ``{slot}`` placeholders, one file per
purpose and role. Builders substitute trusted template slots only, so user
text containing braces passes through untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..graph.model import GraphEdge, GraphNode

PURPOSES = ("cypher_gen", "verbalize", "subgraph_gen", "judge", "llm_only")

SCHEMA_ERROR_MARKER = "SCHEMA_ERROR"
FALLBACK_EXPLANATION = "the question cannot be answered with the graph schema"
EMPTY_RESULT_MARKER = "(no rows)"
DENIAL_ANSWER = "I don't know"

CYPHER_TEMPERATURE = 0.0
SUBGRAPH_TEMPERATURE = 0.0
DEFAULT_VERBALIZE_TEMPERATURE = 0.0

_SLOT_RE = re.compile(r"\{([a-z_]+)\}")


@dataclass(frozen=True)
class PromptBundle:
    purpose: str
    system: str
    user: str
    filled_slots: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class SchemaErrorSignal:
    explanation: str


def fill_template(template: str, values: Mapping[str, str]) -> str:
    """Substitute every ``{slot}`` in the template. The slot set must equal
    the provided keys exactly, so a typo on either side fails loudly."""
    slots = set(_SLOT_RE.findall(template))
    missing = slots - set(values)
    if missing:
        raise ValueError(f"template slots not filled: {sorted(missing)}")
    extra = set(values) - slots
    if extra:
        raise ValueError(f"values for unknown slots: {sorted(extra)}")
    filled = template
    for name, value in values.items():
        filled = filled.replace("{" + name + "}", value)
    return filled


class PromptLibrary:
    """Loads ``<purpose>.<role>.txt`` files from a directory, the packaged
    templates by default."""

    def __init__(self, directory: str | Path | None = None):
        self._directory = (
            Path(directory) if directory is not None else Path(__file__).parent / "templates"
        )
        self._cache: dict[tuple[str, str], str] = {}

    def template(self, purpose: str, role: str) -> str:
        key = (purpose, role)
        if key not in self._cache:
            path = self._directory / f"{purpose}.{role}.txt"
            if not path.is_file():
                raise FileNotFoundError(f"no template {purpose}.{role} in {self._directory}")
            self._cache[key] = path.read_text(encoding="utf-8")
        return self._cache[key]


_default_library = PromptLibrary()


def _library(library: PromptLibrary | None) -> PromptLibrary:
    return library if library is not None else _default_library


def render_cell(value: object) -> str:
    """Deterministic single-cell text. Nodes show name, id, and label; edges
    show the connection; plain values use lowercase null/true/false."""
    if isinstance(value, GraphNode):
        name = value.properties.get("name", value.id)
        return f"{name} [{value.label}]"
    if isinstance(value, GraphEdge):
        return f"{value.source} -{value.rel_type}-> {value.target}"
    if isinstance(value, Mapping):
        if value.get("kind") == "node":
            name = value.get("properties", {}).get("name") or value.get("id", "?")
            return f"{name} [{value.get('label', '?')}]"
        if value.get("kind") == "edge":
            return f"{value.get('source')} -{value.get('rel_type')}-> {value.get('target')}"
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def render_result_rows(columns: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Header plus one line per row, cells separated by `` | ``. Empty
    results render as the empty-result marker alone."""
    if not rows:
        return EMPTY_RESULT_MARKER
    lines = [" | ".join(columns)]
    for row in rows:
        lines.append(" | ".join(render_cell(cell) for cell in row))
    return "\n".join(lines)


def build_cypher_prompt(
    schema_text: str,
    question: str,
    ee_sentences: Sequence[str] = (),
    rel_descriptions_text: str = "",
    library: PromptLibrary | None = None,
) -> PromptBundle:
    if not schema_text:
        raise ValueError("schema text must not be empty")
    lib = _library(library)
    ee_block = ""
    if ee_sentences:
        ee_block = (
            "These entities were recognized in the question:\n"
            + "\n".join(ee_sentences)
            + "\n\n"
        )
    rel_block = rel_descriptions_text + "\n\n" if rel_descriptions_text else ""
    values = {
        "schema": schema_text,
        "rel_descriptions": rel_block,
        "ee_block": ee_block,
        "question": question,
    }
    return PromptBundle(
        purpose="cypher_gen",
        system=lib.template("cypher_gen", "system"),
        user=fill_template(lib.template("cypher_gen", "user"), values),
        filled_slots=values,
    )


def build_verbalization_prompt(
    question: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[object]],
    library: PromptLibrary | None = None,
) -> PromptBundle:
    lib = _library(library)
    values = {"question": question, "rows": render_result_rows(columns, rows)}
    return PromptBundle(
        purpose="verbalize",
        system=lib.template("verbalize", "system"),
        user=fill_template(lib.template("verbalize", "user"), values),
        filled_slots=values,
    )


def build_subgraph_prompt(
    cypher_query: str, library: PromptLibrary | None = None
) -> PromptBundle:
    if not cypher_query.strip():
        raise ValueError("query must not be empty")
    lib = _library(library)
    values = {"query": cypher_query}
    return PromptBundle(
        purpose="subgraph_gen",
        system=lib.template("subgraph_gen", "system"),
        user=fill_template(lib.template("subgraph_gen", "user"), values),
        filled_slots=values,
    )


def build_judge_prompt(
    question: str,
    reference: str,
    candidates: Sequence[tuple[str, str]],
    library: PromptLibrary | None = None,
) -> PromptBundle:
    """``candidates`` pairs a letter label with the candidate answer."""
    lib = _library(library)
    rendered = "\n".join(f"{label}: {answer}" for label, answer in candidates)
    values = {"question": question, "reference": reference, "candidates": rendered}
    return PromptBundle(
        purpose="judge",
        system=lib.template("judge", "system"),
        user=fill_template(lib.template("judge", "user"), values),
        filled_slots=values,
    )


def build_llm_only_prompt(
    question: str, library: PromptLibrary | None = None
) -> PromptBundle:
    lib = _library(library)
    values = {"question": question}
    return PromptBundle(
        purpose="llm_only",
        system=lib.template("llm_only", "system"),
        user=fill_template(lib.template("llm_only", "user"), values),
        filled_slots=values,
    )


def strip_code_fences(text: str) -> str:
    """Content of the first fenced block when the response is fenced,
    otherwise the response itself, trimmed either way."""
    stripped = text.strip()
    if "```" not in stripped:
        return stripped
    start = stripped.index("```")
    after = stripped.index("\n", start) + 1 if "\n" in stripped[start:] else len(stripped)
    end = stripped.find("```", after)
    if end == -1:
        return stripped[after:].strip()
    return stripped[after:end].strip()


def _marker_positions_outside_strings(text: str) -> Iterable[int]:
    quote: str | None = None
    index = 0
    while index < len(text):
        char = text[index]
        if quote is not None:
            if char == "\\":
                index += 2
                continue
            if char == quote:
                quote = None
        elif char in ('"', "'"):
            quote = char
        elif text.startswith(SCHEMA_ERROR_MARKER, index):
            yield index
            index += len(SCHEMA_ERROR_MARKER)
            continue
        index += 1


def detect_schema_error(response: str) -> SchemaErrorSignal | None:
    """Signal when the marker token appears outside a quoted string. The
    explanation is whatever trails the first marker, or a fixed message when
    nothing does."""
    for position in _marker_positions_outside_strings(response):
        trailing = response[position + len(SCHEMA_ERROR_MARKER) :]
        explanation = trailing.strip().lstrip(":,-").strip()
        return SchemaErrorSignal(explanation=explanation or FALLBACK_EXPLANATION)
    return None
