"""The rewrite chain hardening generated queries before execution.

Order of work inside :func:`apply_chain`:

  deprecated (raw text)  ->  parse  ->  format  ->  lowercase_values
                         ->  synonyms  ->  child_to_parent

Text-level rewrites run first because deprecated constructs may not parse at
all. Every textual change becomes one ChangeEntry holding the exact fragment
swapped and its character position, so replaying the entries over the input
reproduces the output byte for byte. Lookups that found nothing to change go
into ``notes`` instead; they carry no textual delta, and keeping them out of
``entries`` is what lets a second pass over already-clean text come back with
an empty entry list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..cypher.formatter import format_query
from ..cypher.parser import ParseError, parse
from ..graph.model import PropertyGraph
from ..graph.schema import ParentRule
from .steps import (
    DEFAULT_DEPRECATION_RULES,
    DeprecationRule,
    next_deprecation_change,
    plan_child_to_parent,
    plan_lowercase,
    plan_synonyms,
)
from .synonyms import StaticSynonymProvider, SynonymProvider

STEP_NAMES = ("deprecated", "format", "lowercase_values", "synonyms", "child_to_parent")

_MAX_TEXT_REWRITES = 100


@dataclass(frozen=True)
class PreprocessorStep:
    name: str
    enabled: bool = True


DEFAULT_CHAIN = tuple(PreprocessorStep(name) for name in STEP_NAMES)


class PreprocessError(ValueError):
    """Raised when the incoming query cannot be parsed (after text-level
    rewrites) or when the chain configuration is unusable."""

    def __init__(self, message: str, cause: ParseError | None = None):
        super().__init__(message)
        self.cause = cause


@dataclass(frozen=True)
class ChangeEntry:
    step: str
    before: str
    after: str
    position: int


@dataclass
class ChangeLog:
    entries: list[ChangeEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class PreprocessResult:
    text: str
    log: ChangeLog


def replay(text: str, entries: list[ChangeEntry]) -> str:
    """Apply logged changes in order by splicing each fragment at its
    recorded position. Raises ValueError when the text does not carry the
    expected fragment, which means the log and the input diverged."""
    for entry in entries:
        end = entry.position + len(entry.before)
        if text[entry.position : end] != entry.before:
            raise ValueError(
                f"change log does not apply: expected {entry.before!r} "
                f"at position {entry.position}"
            )
        text = text[: entry.position] + entry.after + text[end:]
    return text


def _diff_entry(step: str, old: str, new: str) -> ChangeEntry | None:
    """Single contiguous fragment swap turning ``old`` into ``new``, found by
    trimming the common prefix and suffix."""
    if old == new:
        return None
    start = 0
    limit = min(len(old), len(new))
    while start < limit and old[start] == new[start]:
        start += 1
    end_old, end_new = len(old), len(new)
    while end_old > start and end_new > start and old[end_old - 1] == new[end_new - 1]:
        end_old -= 1
        end_new -= 1
    return ChangeEntry(
        step=step, before=old[start:end_old], after=new[start:end_new], position=start
    )


def _enabled_steps(steps) -> set[str]:
    if steps is None:
        steps = DEFAULT_CHAIN
    names = [step.name for step in steps]
    if len(names) != len(set(names)):
        raise PreprocessError("step names must be unique within a chain")
    unknown = set(names) - set(STEP_NAMES)
    if unknown:
        raise PreprocessError(f"unknown step names: {sorted(unknown)}")
    enabled = {step.name for step in steps if step.enabled}
    if "format" not in enabled:
        raise PreprocessError(
            "the format step cannot be disabled; later steps rewrite the "
            "formatted text"
        )
    return enabled


def apply_chain(
    query_text: str,
    graph: PropertyGraph,
    parent_child: Mapping[str, ParentRule] | None = None,
    synonyms: SynonymProvider | None = None,
    *,
    deprecation_rules: tuple[DeprecationRule, ...] = DEFAULT_DEPRECATION_RULES,
    steps: tuple[PreprocessorStep, ...] | None = None,
) -> PreprocessResult:
    """Run the chain over ``query_text`` and return the hardened text with
    the full change log. ``parent_child`` defaults to the map attached to the
    graph at ingestion; ``synonyms`` defaults to an empty local map."""
    enabled = _enabled_steps(steps)
    if synonyms is None:
        synonyms = StaticSynonymProvider({})
    if parent_child is None:
        parent_child = {
            child: rule if isinstance(rule, ParentRule) else ParentRule(str(rule))
            for child, rule in graph.parent_child.items()
        }

    log = ChangeLog()
    text = query_text

    if "deprecated" in enabled:
        for _ in range(_MAX_TEXT_REWRITES):
            change = next_deprecation_change(text, deprecation_rules)
            if change is None:
                break
            position, before, after = change
            log.entries.append(
                ChangeEntry(step="deprecated", before=before, after=after, position=position)
            )
            text = text[:position] + after + text[position + len(before) :]
        else:
            raise PreprocessError(
                "deprecation rules did not converge; a replacement likely "
                "reintroduces its own pattern"
            )

    try:
        query = parse(text)
    except ParseError as exc:
        raise PreprocessError(f"query does not parse: {exc}", cause=exc) from exc

    rendered = format_query(query)
    entry = _diff_entry("format", text, rendered)
    if entry is not None:
        log.entries.append(entry)
    text = rendered

    def apply_plans(step_name: str, plans) -> None:
        nonlocal text
        for plan in plans:
            plan()
            new_text = format_query(query)
            entry = _diff_entry(step_name, text, new_text)
            if entry is not None:
                log.entries.append(entry)
            text = new_text

    if "lowercase_values" in enabled:
        apply_plans("lowercase_values", plan_lowercase(query))
    if "synonyms" in enabled:
        plans, notes = plan_synonyms(query, graph, synonyms)
        apply_plans("synonyms", plans)
        log.notes.extend(notes)
    if "child_to_parent" in enabled:
        apply_plans("child_to_parent", plan_child_to_parent(query, parent_child))

    return PreprocessResult(text=text, log=log)
