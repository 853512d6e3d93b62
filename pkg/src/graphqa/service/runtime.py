"""Assemble a ready-to-serve pipeline from a :class:`ServiceConfig`.

The runtime owns everything the HTTP layer and the CLI share: the ingested
graph, the vocabulary and synonym resources, the chat backend, and one
:class:`Pipeline` instance. Construction does all the file reading up front
so the process either starts healthy or not at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..entities import Vocabulary, load_vocabulary_file, vocabulary_from_graph
from ..graph import (
    GraphSchema,
    PropertyGraph,
    extract_schema,
    ingest,
    load_kv_file,
    load_parent_child_file,
)
from ..llm import (
    ChatBackend,
    HttpChatBackend,
    PromptLibrary,
    ScriptedBackend,
    load_backend_script,
)
from ..pipeline import Pipeline
from ..preprocess import (
    DEFAULT_DEPRECATION_RULES,
    DeprecationRule,
    StaticSynonymProvider,
    load_deprecation_rules,
    load_synonym_file,
)
from .config import ServiceConfig


@dataclass
class ServiceRuntime:
    config: ServiceConfig
    graph: PropertyGraph
    schema: GraphSchema
    pipeline: Pipeline
    backend: ChatBackend
    vocab: Vocabulary
    synonyms: StaticSynonymProvider | None
    deprecation_rules: tuple[DeprecationRule, ...]
    parent_child: dict = field(default_factory=dict)

    @property
    def backend_reachable(self) -> bool:
        # A scripted backend is an in-process table, so it is always
        # reachable; a live backend is reachable once its credential is
        # resolvable without performing a network round trip.
        if isinstance(self.backend, ScriptedBackend):
            return True
        if isinstance(self.backend, HttpChatBackend):
            import os

            return bool(os.environ.get(self.backend.api_key_env))
        return True


def build_backend(config: ServiceConfig) -> ChatBackend:
    if config.backend_kind == "scripted":
        return load_backend_script(config.backend_script_file)
    return HttpChatBackend(
        endpoint=config.endpoint,
        model=config.model,
        api_key_env=config.api_key_env,
    )


def build_runtime(config: ServiceConfig) -> ServiceRuntime:
    relation_descriptions = (
        load_kv_file(config.relation_descriptions_file)
        if config.relation_descriptions_file
        else None
    )
    parent_child = (
        load_parent_child_file(config.parent_child_file)
        if config.parent_child_file
        else {}
    )
    preferred_terms = (
        load_kv_file(config.preferred_terms_file) if config.preferred_terms_file else None
    )
    graph = ingest(
        config.nodes_file,
        config.edges_file,
        relation_descriptions=relation_descriptions,
        parent_child=parent_child or None,
        preferred_terms=preferred_terms,
    )
    schema = extract_schema(graph)

    vocab = (
        load_vocabulary_file(config.vocabulary_file)
        if config.vocabulary_file
        else vocabulary_from_graph(graph)
    )
    synonyms = load_synonym_file(config.synonyms_file) if config.synonyms_file else None
    deprecation_rules = (
        load_deprecation_rules(config.deprecation_rules_file)
        if config.deprecation_rules_file
        else DEFAULT_DEPRECATION_RULES
    )
    library = PromptLibrary(config.template_dir) if config.template_dir else PromptLibrary()
    backend = build_backend(config)

    pipeline = Pipeline(
        graph,
        backend,
        schema=schema,
        vocab=vocab,
        synonyms=synonyms,
        deprecation_rules=deprecation_rules,
        library=library,
    )
    return ServiceRuntime(
        config=config,
        graph=graph,
        schema=schema,
        pipeline=pipeline,
        backend=backend,
        vocab=vocab,
        synonyms=synonyms,
        deprecation_rules=deprecation_rules,
        parent_child=dict(parent_child),
    )
