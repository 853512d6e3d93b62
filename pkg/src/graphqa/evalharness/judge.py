"""Grading two candidate answers against graph ground truth.

The judge sees the question, the result rows, and both answers under letter
labels, and must reply one line per label in the form
``A: correct=yes complete=no``. A reply line that does not parse counts as
an abstention for that label, never an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ..llm.backends import ChatBackend
from ..llm.prompts import (
    PromptBundle,
    PromptLibrary,
    build_judge_prompt as _build,
    render_result_rows,
)

_VERDICT_LINE = re.compile(
    r"^\s*([A-Za-z])\s*:\s*correct\s*=\s*(yes|no)\s+complete\s*=\s*(yes|no)\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class JudgeVerdict:
    label: str
    correct: bool
    complete: bool


def build_judge_prompt(
    question: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[object]],
    answer_a: str,
    answer_b: str,
    library: PromptLibrary | None = None,
) -> PromptBundle:
    reference = render_result_rows(columns, rows)
    return _build(
        question, reference, [("A", answer_a), ("B", answer_b)], library=library
    )


def parse_verdict_lines(text: str) -> dict[str, JudgeVerdict]:
    """Verdicts keyed by upper-case label; lines that do not match the
    format are skipped. A label seen twice keeps its first verdict."""
    verdicts: dict[str, JudgeVerdict] = {}
    for line in text.splitlines():
        match = _VERDICT_LINE.match(line)
        if match is None:
            continue
        label = match.group(1).upper()
        if label in verdicts:
            continue
        verdicts[label] = JudgeVerdict(
            label=label,
            correct=match.group(2).lower() == "yes",
            complete=match.group(3).lower() == "yes",
        )
    return verdicts


def judge_answers(
    question: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[object]],
    answer_a: str,
    answer_b: str,
    backend: ChatBackend,
    library: PromptLibrary | None = None,
    temperature: float = 0.0,
) -> tuple[JudgeVerdict | None, JudgeVerdict | None]:
    """Run the judge once; missing or malformed verdicts come back as None
    (abstentions)."""
    bundle = build_judge_prompt(question, columns, rows, answer_a, answer_b, library)
    response = backend.complete(bundle.system, bundle.user, temperature)
    verdicts = parse_verdict_lines(response)
    return verdicts.get("A"), verdicts.get("B")
