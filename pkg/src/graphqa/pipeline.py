"""End-to-end question answering.

The hybrid path runs: entity mention handling, query generation, the rewrite
chain, execution, evidence subgraph assembly, and verbalization. Every
intermediate artifact lands in the evidence bundle, including all prompts
sent to the backend, so a failure in a late stage still leaves everything
earlier intact. The llm_only path skips the graph entirely and exists for
side-by-side comparison.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cypher.ast import CypherQuery, NodePattern, RelPattern
from .cypher.executor import ExecutionError, ResultTable, execute
from .cypher.formatter import format_query
from .cypher.parser import ParseError, parse
from .cypher.rewrite import (
    is_all_variable_projection,
    match_topology_signature,
    rewrite_return_all_bound,
)
from .entities import (
    EntityMention,
    Vocabulary,
    enhancement_sentences,
    extract,
    rewrite_question,
)
from .graph.model import GraphEdge, GraphNode, PropertyGraph
from .graph.schema import GraphSchema, extract_schema, render_descriptions_text, render_schema_text
from .llm.backends import BackendError, ChatBackend
from .llm.prompts import (
    CYPHER_TEMPERATURE,
    DEFAULT_VERBALIZE_TEMPERATURE,
    SUBGRAPH_TEMPERATURE,
    PromptBundle,
    PromptLibrary,
    SchemaErrorSignal,
    build_cypher_prompt,
    build_llm_only_prompt,
    build_subgraph_prompt,
    build_verbalization_prompt,
    detect_schema_error,
    render_result_rows,
    strip_code_fences,
)
from .preprocess.chain import ChangeLog, PreprocessError, apply_chain
from .preprocess.steps import DEFAULT_DEPRECATION_RULES, DeprecationRule
from .preprocess.synonyms import SynonymProvider

PIPELINE_KINDS = ("hybrid", "llm_only")
SUBGRAPH_MODES = ("llm", "deterministic", "off")


@dataclass(frozen=True)
class PipelineOptions:
    entity_enhancement: bool = True
    subgraph_mode: str = "deterministic"
    verbalize: bool = True
    pipeline_kind: str = "hybrid"
    verbalize_temperature: float = DEFAULT_VERBALIZE_TEMPERATURE

    def __post_init__(self) -> None:
        if self.pipeline_kind not in PIPELINE_KINDS:
            raise ValueError(f"pipeline_kind must be one of {PIPELINE_KINDS}")
        if self.subgraph_mode not in SUBGRAPH_MODES:
            raise ValueError(f"subgraph_mode must be one of {SUBGRAPH_MODES}")


@dataclass
class Subgraph:
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)


@dataclass
class EvidenceBundle:
    generated_cypher: str | None = None
    preprocessed_cypher: str | None = None
    change_log: ChangeLog | None = None
    graph_rows: ResultTable = field(default_factory=lambda: ResultTable([], []))
    subgraph: Subgraph = field(default_factory=Subgraph)
    prompts: list[PromptBundle] = field(default_factory=list)
    schema_error: SchemaErrorSignal | None = None
    entity_mentions: list[EntityMention] = field(default_factory=list)
    enhanced_question: str | None = None


@dataclass
class PipelineResponse:
    answer: str
    evidence: EvidenceBundle
    status: str
    timings: dict[str, float] = field(default_factory=dict)
    failed_stage: str | None = None


class _StageClock:
    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    def run(self, stage: str, fn):
        started = time.perf_counter()
        try:
            return fn()
        finally:
            self.timings[stage] = time.perf_counter() - started


class Pipeline:
    """Shared state (graph, schema, vocabulary, templates) is immutable, so
    one instance can serve concurrent requests."""

    def __init__(
        self,
        graph: PropertyGraph,
        backend: ChatBackend,
        schema: GraphSchema | None = None,
        vocab: Vocabulary | None = None,
        synonyms: SynonymProvider | None = None,
        deprecation_rules: tuple[DeprecationRule, ...] = DEFAULT_DEPRECATION_RULES,
        library: PromptLibrary | None = None,
    ):
        self.graph = graph
        self.backend = backend
        self.schema = schema if schema is not None else extract_schema(graph)
        self.vocab = vocab
        self.synonyms = synonyms
        self.deprecation_rules = deprecation_rules
        self.library = library
        self._schema_text = render_schema_text(self.schema, include_descriptions=False)
        self._descriptions_text = render_descriptions_text(self.schema)

    # -- entry points ----------------------------------------------------------

    def answer(self, question: str, options: PipelineOptions | None = None) -> PipelineResponse:
        options = options or PipelineOptions()
        if options.pipeline_kind == "llm_only":
            return self._answer_llm_only(question, options)
        return self._answer_hybrid(question, options)

    def answer_with_query(
        self, question: str, query_text: str, options: PipelineOptions | None = None
    ) -> PipelineResponse:
        """Skip generation and run the remaining stages over a caller-supplied
        query. Useful for replaying stored queries."""
        options = options or PipelineOptions()
        evidence = EvidenceBundle(generated_cypher=query_text.strip())
        clock = _StageClock()
        response = self._run_from_preprocess(question, evidence, options, clock)
        response.timings = clock.timings
        return response

    # -- llm-only path ---------------------------------------------------------

    def _answer_llm_only(self, question: str, options: PipelineOptions) -> PipelineResponse:
        evidence = EvidenceBundle()
        clock = _StageClock()
        bundle = build_llm_only_prompt(question, self.library)
        evidence.prompts.append(bundle)
        try:
            answer = clock.run(
                "llm_only",
                lambda: self.backend.complete(
                    bundle.system, bundle.user, options.verbalize_temperature
                ),
            )
        except BackendError as exc:
            return PipelineResponse(
                answer=str(exc),
                evidence=evidence,
                status="backend_error",
                timings=clock.timings,
                failed_stage="llm_only",
            )
        return PipelineResponse(
            answer=answer.strip(),
            evidence=evidence,
            status="answered",
            timings=clock.timings,
        )

    # -- hybrid path -----------------------------------------------------------

    def _answer_hybrid(self, question: str, options: PipelineOptions) -> PipelineResponse:
        evidence = EvidenceBundle()
        clock = _StageClock()

        def entities_stage() -> tuple[str, list[str]]:
            if not options.entity_enhancement or self.vocab is None:
                return question, []
            mentions = extract(question, self.vocab)
            evidence.entity_mentions = mentions
            if not mentions:
                return question, []
            rewritten = rewrite_question(question, mentions)
            evidence.enhanced_question = rewritten
            return rewritten, enhancement_sentences(mentions)

        effective_question, ee_sentences = clock.run("entities", entities_stage)

        bundle = build_cypher_prompt(
            self._schema_text,
            effective_question,
            ee_sentences,
            self._descriptions_text,
            self.library,
        )
        evidence.prompts.append(bundle)
        try:
            raw = clock.run(
                "generate",
                lambda: self.backend.complete(bundle.system, bundle.user, CYPHER_TEMPERATURE),
            )
        except BackendError as exc:
            return PipelineResponse(
                answer=str(exc),
                evidence=evidence,
                status="backend_error",
                timings=clock.timings,
                failed_stage="generate",
            )

        signal = detect_schema_error(raw)
        if signal is not None:
            evidence.schema_error = signal
            return PipelineResponse(
                answer=signal.explanation,
                evidence=evidence,
                status="schema_error",
                timings=clock.timings,
            )

        evidence.generated_cypher = strip_code_fences(raw)
        response = self._run_from_preprocess(question, evidence, options, clock)
        response.timings = clock.timings
        return response

    def _run_from_preprocess(
        self,
        question: str,
        evidence: EvidenceBundle,
        options: PipelineOptions,
        clock: _StageClock,
    ) -> PipelineResponse:
        try:
            result = clock.run(
                "preprocess",
                lambda: apply_chain(
                    evidence.generated_cypher,
                    self.graph,
                    parent_child=self.schema.parent_child,
                    synonyms=self.synonyms,
                    deprecation_rules=self.deprecation_rules,
                ),
            )
        except PreprocessError as exc:
            return PipelineResponse(
                answer=str(exc),
                evidence=evidence,
                status="parse_error",
                failed_stage="preprocess",
            )
        evidence.preprocessed_cypher = result.text
        evidence.change_log = result.log

        # The chain output reparses by construction; execution can still
        # reject the query (unknown function, bad ORDER BY target), which
        # counts as an unusable query, not a backend fault.
        try:
            query = parse(result.text)
            evidence.graph_rows = clock.run("execute", lambda: execute(query, self.graph))
        except (ParseError, ExecutionError) as exc:
            return PipelineResponse(
                answer=str(exc),
                evidence=evidence,
                status="parse_error",
                failed_stage="execute",
            )

        if options.subgraph_mode != "off":
            evidence.subgraph = clock.run(
                "subgraph",
                lambda: self.build_subgraph(query, options.subgraph_mode, evidence.prompts),
            )

        if not options.verbalize:
            answer = render_result_rows(evidence.graph_rows.columns, evidence.graph_rows.rows)
            return PipelineResponse(answer=answer, evidence=evidence, status="answered")

        bundle = build_verbalization_prompt(
            question, evidence.graph_rows.columns, evidence.graph_rows.rows, self.library
        )
        evidence.prompts.append(bundle)
        try:
            answer = clock.run(
                "verbalize",
                lambda: self.backend.complete(
                    bundle.system, bundle.user, options.verbalize_temperature
                ),
            )
        except BackendError as exc:
            return PipelineResponse(
                answer=str(exc),
                evidence=evidence,
                status="backend_error",
                failed_stage="verbalize",
            )
        return PipelineResponse(answer=answer.strip(), evidence=evidence, status="answered")

    # -- evidence subgraph -------------------------------------------------------

    def build_subgraph(
        self,
        query: CypherQuery,
        mode: str,
        prompt_sink: list[PromptBundle] | None = None,
    ) -> Subgraph:
        """Nodes and edges behind the query's bindings. llm mode asks the
        backend for the rewrite and falls back to the deterministic one
        unless the reply parses, keeps the MATCH/WHERE structure, and
        returns only variables."""
        if mode == "off":
            return Subgraph()
        rewritten = rewrite_return_all_bound(query)
        if mode == "llm":
            candidate = self._llm_rewrite(query, prompt_sink)
            if candidate is not None:
                rewritten = candidate
        try:
            table = execute(rewritten, self.graph)
        except ExecutionError:
            return Subgraph()
        return _collect_subgraph(table, self.graph)

    def _llm_rewrite(
        self, query: CypherQuery, prompt_sink: list[PromptBundle] | None
    ) -> CypherQuery | None:
        bundle = build_subgraph_prompt(format_query(query), self.library)
        if prompt_sink is not None:
            prompt_sink.append(bundle)
        try:
            response = self.backend.complete(bundle.system, bundle.user, SUBGRAPH_TEMPERATURE)
        except BackendError:
            return None
        try:
            candidate = parse(strip_code_fences(response))
        except ParseError:
            return None
        if not is_all_variable_projection(candidate):
            return None
        returned = {item.expr.name for item in candidate.return_items}
        if returned != _named_pattern_variables(candidate):
            return None
        if match_topology_signature(candidate) != match_topology_signature(query):
            return None
        return candidate


def _named_pattern_variables(query: CypherQuery) -> set[str]:
    names: set[str] = set()
    for clause in query.match_clauses:
        for chain in clause.chains:
            for element in chain.elements:
                if isinstance(element, (NodePattern, RelPattern)) and element.variable:
                    names.add(element.variable)
    return names


def _collect_subgraph(table: ResultTable, graph: PropertyGraph) -> Subgraph:
    nodes: dict[str, GraphNode] = {}
    edges: dict[tuple, GraphEdge] = {}
    for row in table.rows:
        for cell in row:
            if isinstance(cell, GraphNode):
                nodes.setdefault(cell.id, cell)
            elif isinstance(cell, GraphEdge):
                edges.setdefault(
                    (cell.source, cell.target, cell.rel_type, cell.index), cell
                )
    # An anonymous node pattern binds no variable, so its node never shows up
    # as a cell; pull such endpoints in directly to keep every edge anchored.
    for edge in edges.values():
        for endpoint in (edge.source, edge.target):
            if endpoint not in nodes:
                nodes[endpoint] = graph.node(endpoint)
    return Subgraph(nodes=list(nodes.values()), edges=list(edges.values()))
