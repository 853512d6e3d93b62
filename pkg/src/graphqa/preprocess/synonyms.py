"""Synonym candidate providers for value normalization.

A provider maps a term (optionally scoped by a node label) to an ordered list
of candidate preferred terms. The rewrite step accepts the first candidate
that actually exists in the graph, so providers are free to over-suggest.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Protocol, runtime_checkable

from ..graph.ingest import IngestError


@runtime_checkable
class SynonymProvider(Protocol):
    def lookup(self, term: str, label: str | None = None) -> list[str]: ...


class StaticSynonymProvider:
    """Candidates from an in-memory map. Keys are matched case-insensitively;
    a key may map to one candidate or an ordered list of them."""

    def __init__(self, mapping: Mapping[str, str | list[str]]):
        self._mapping: dict[str, list[str]] = {}
        for term, candidates in mapping.items():
            if isinstance(candidates, str):
                candidates = [candidates]
            self._mapping[term.lower()] = [c.lower() for c in candidates]

    def lookup(self, term: str, label: str | None = None) -> list[str]:
        return list(self._mapping.get(term.lower(), []))


class CompositeSynonymProvider:
    """Consults providers in order and concatenates their candidates, earlier
    providers first, dropping duplicates. Put the local map ahead of any
    external service so local choices win."""

    def __init__(self, providers: Iterable[SynonymProvider]):
        self._providers = list(providers)

    def lookup(self, term: str, label: str | None = None) -> list[str]:
        seen: set[str] = set()
        out: list[str] = []
        for provider in self._providers:
            for candidate in provider.lookup(term, label):
                if candidate not in seen:
                    seen.add(candidate)
                    out.append(candidate)
        return out


def load_synonym_file(source) -> StaticSynonymProvider:
    """Read ``term<TAB>preferred`` lines (# starts a comment). A term listed
    on several lines accumulates candidates in file order."""
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = list(source)
    mapping: dict[str, list[str]] = {}
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [part.strip() for part in stripped.split("\t")]
        if len(parts) != 2 or not all(parts):
            raise IngestError(f"synonym line {number} is malformed: {line!r}")
        mapping.setdefault(parts[0].lower(), []).append(parts[1].lower())
    return StaticSynonymProvider(mapping)
