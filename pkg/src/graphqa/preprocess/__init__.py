"""Query hardening: deprecation rewrites, value normalization, change log."""

from .chain import (
    DEFAULT_CHAIN,
    STEP_NAMES,
    ChangeEntry,
    ChangeLog,
    PreprocessError,
    PreprocessResult,
    PreprocessorStep,
    apply_chain,
    replay,
)
from .steps import (
    DEFAULT_DEPRECATION_RULES,
    DeprecationRule,
    ValueSlot,
    collect_value_slots,
    load_deprecation_rules,
)
from .synonyms import (
    CompositeSynonymProvider,
    StaticSynonymProvider,
    SynonymProvider,
    load_synonym_file,
)

__all__ = [
    "DEFAULT_CHAIN",
    "DEFAULT_DEPRECATION_RULES",
    "STEP_NAMES",
    "ChangeEntry",
    "ChangeLog",
    "CompositeSynonymProvider",
    "DeprecationRule",
    "PreprocessError",
    "PreprocessResult",
    "PreprocessorStep",
    "StaticSynonymProvider",
    "SynonymProvider",
    "ValueSlot",
    "apply_chain",
    "collect_value_slots",
    "load_deprecation_rules",
    "load_synonym_file",
    "replay",
]
