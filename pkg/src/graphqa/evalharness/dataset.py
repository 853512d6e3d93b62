"""Ground-truth dataset loading.

One JSON record per line: id, question, gold_cypher, expected_answer, and
optional expected_nodes / expected_relationships lists. A record whose gold
query the engine grammar rejects is kept but flagged unsupported, so runs
can report it instead of silently shrinking the dataset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..cypher.parser import ParseError, parse


class DatasetError(ValueError):
    """A record is malformed; the message names the line and the field."""


@dataclass
class EvalSample:
    id: str
    question: str
    gold_cypher: str
    expected_answer: str
    expected_nodes: list[str] = field(default_factory=list)
    expected_relationships: list[str] = field(default_factory=list)
    supported: bool = True
    unsupported_reason: str | None = None


_REQUIRED = ("id", "question", "gold_cypher", "expected_answer")


def load_dataset(source) -> list[EvalSample]:
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = list(source)

    samples: list[EvalSample] = []
    seen_ids: set[str] = set()
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"record {number} is not valid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise DatasetError(f"record {number} is not an object")
        for name in _REQUIRED:
            value = record.get(name)
            if not isinstance(value, str) or not value.strip():
                raise DatasetError(f"record {number} is missing field {name!r}")
        sample_id = record["id"]
        if sample_id in seen_ids:
            raise DatasetError(f"record {number} repeats id {sample_id!r}")
        seen_ids.add(sample_id)
        for name in ("expected_nodes", "expected_relationships"):
            value = record.get(name, [])
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise DatasetError(f"record {number} field {name!r} must be a string list")

        sample = EvalSample(
            id=sample_id,
            question=record["question"],
            gold_cypher=record["gold_cypher"],
            expected_answer=record["expected_answer"],
            expected_nodes=list(record.get("expected_nodes", [])),
            expected_relationships=list(record.get("expected_relationships", [])),
        )
        try:
            parse(sample.gold_cypher)
        except ParseError as exc:
            sample.supported = False
            sample.unsupported_reason = str(exc)
        samples.append(sample)
    return samples
