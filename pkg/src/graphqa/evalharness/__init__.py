"""Dataset loading, retrieval metrics, robustness runs, and judging."""

from .dataset import DatasetError, EvalSample, load_dataset
from .harness import (
    DEFAULT_DENIAL_MARKERS,
    DEFAULT_HEDGE_MARKERS,
    MetricsReport,
    RobustnessVerdict,
    SampleOutcome,
    audit_answer_grounding,
    classify_robustness,
    cyclic_shift_queries,
    evaluate_retrieval,
    gold_echo_backend,
    run_robustness,
)
from .judge import JudgeVerdict, build_judge_prompt, judge_answers, parse_verdict_lines
from .metrics import (
    RetrievalMetrics,
    canonical_cell,
    canonical_row,
    mean_metrics,
    row_set,
    row_set_metrics,
    set_metrics,
)
from .report import (
    render_retrieval_table,
    render_robustness_table,
    report_to_json,
    report_to_wire,
)

__all__ = [
    "DEFAULT_DENIAL_MARKERS",
    "DEFAULT_HEDGE_MARKERS",
    "DatasetError",
    "EvalSample",
    "JudgeVerdict",
    "MetricsReport",
    "RetrievalMetrics",
    "RobustnessVerdict",
    "SampleOutcome",
    "audit_answer_grounding",
    "build_judge_prompt",
    "canonical_cell",
    "canonical_row",
    "classify_robustness",
    "cyclic_shift_queries",
    "evaluate_retrieval",
    "gold_echo_backend",
    "judge_answers",
    "load_dataset",
    "mean_metrics",
    "parse_verdict_lines",
    "render_retrieval_table",
    "render_robustness_table",
    "report_to_json",
    "report_to_wire",
    "row_set",
    "row_set_metrics",
    "set_metrics",
]
