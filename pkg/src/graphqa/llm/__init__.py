"""Chat backends, prompt builders, and response post-processing."""

from .backends import (
    BackendError,
    ChatBackend,
    FunctionBackend,
    HttpChatBackend,
    ScriptedBackend,
    load_backend_script,
)
from .prompts import (
    CYPHER_TEMPERATURE,
    DEFAULT_VERBALIZE_TEMPERATURE,
    DENIAL_ANSWER,
    EMPTY_RESULT_MARKER,
    FALLBACK_EXPLANATION,
    PURPOSES,
    SCHEMA_ERROR_MARKER,
    SUBGRAPH_TEMPERATURE,
    PromptBundle,
    PromptLibrary,
    SchemaErrorSignal,
    build_cypher_prompt,
    build_judge_prompt,
    build_llm_only_prompt,
    build_subgraph_prompt,
    build_verbalization_prompt,
    detect_schema_error,
    fill_template,
    render_cell,
    render_result_rows,
    strip_code_fences,
)

__all__ = [
    "BackendError",
    "CYPHER_TEMPERATURE",
    "ChatBackend",
    "DEFAULT_VERBALIZE_TEMPERATURE",
    "DENIAL_ANSWER",
    "EMPTY_RESULT_MARKER",
    "FALLBACK_EXPLANATION",
    "FunctionBackend",
    "HttpChatBackend",
    "PURPOSES",
    "PromptBundle",
    "PromptLibrary",
    "SCHEMA_ERROR_MARKER",
    "SUBGRAPH_TEMPERATURE",
    "SchemaErrorSignal",
    "ScriptedBackend",
    "build_cypher_prompt",
    "build_judge_prompt",
    "build_llm_only_prompt",
    "build_subgraph_prompt",
    "build_verbalization_prompt",
    "detect_schema_error",
    "fill_template",
    "load_backend_script",
    "render_cell",
    "render_result_rows",
    "strip_code_fences",
]
