"""One wire schema for pipeline responses.

The HTTP service, the CLI's JSON output, and the evaluation reports all
serialize through these functions, so every consumer sees identical shapes.
Node and edge cells reuse the adapter's dictionary forms.
"""

from __future__ import annotations

from .cypher.adapter import cell_to_wire, edge_to_map, node_to_map
from .cypher.executor import ResultTable
from .entities import EntityMention
from .llm.prompts import PromptBundle, SchemaErrorSignal
from .pipeline import EvidenceBundle, PipelineResponse, Subgraph
from .preprocess.chain import ChangeLog


def result_table_to_wire(table: ResultTable) -> dict:
    return {
        "columns": list(table.columns),
        "rows": [[cell_to_wire(cell) for cell in row] for row in table.rows],
    }


def change_log_to_wire(log: ChangeLog | None) -> dict | None:
    if log is None:
        return None
    return {
        "entries": [
            {
                "step": entry.step,
                "before": entry.before,
                "after": entry.after,
                "position": entry.position,
            }
            for entry in log.entries
        ],
        "notes": list(log.notes),
    }


def subgraph_to_wire(subgraph: Subgraph) -> dict:
    return {
        "nodes": [node_to_map(node) for node in subgraph.nodes],
        "edges": [edge_to_map(edge) for edge in subgraph.edges],
    }


def prompt_to_wire(bundle: PromptBundle) -> dict:
    return {
        "purpose": bundle.purpose,
        "system": bundle.system,
        "user": bundle.user,
        "filled_slots": dict(bundle.filled_slots),
    }


def mention_to_wire(mention: EntityMention) -> dict:
    return {
        "surface": mention.surface,
        "start": mention.start,
        "end": mention.end,
        "preferred_term": mention.preferred_term,
        "category": mention.category,
    }


def schema_error_to_wire(signal: SchemaErrorSignal | None) -> dict | None:
    if signal is None:
        return None
    return {"explanation": signal.explanation}


def evidence_to_wire(evidence: EvidenceBundle) -> dict:
    return {
        "generated_cypher": evidence.generated_cypher,
        "preprocessed_cypher": evidence.preprocessed_cypher,
        "change_log": change_log_to_wire(evidence.change_log),
        "graph_rows": result_table_to_wire(evidence.graph_rows),
        "subgraph": subgraph_to_wire(evidence.subgraph),
        "prompts": [prompt_to_wire(bundle) for bundle in evidence.prompts],
        "schema_error": schema_error_to_wire(evidence.schema_error),
        "entity_mentions": [mention_to_wire(m) for m in evidence.entity_mentions],
        "enhanced_question": evidence.enhanced_question,
    }


def response_to_wire(response: PipelineResponse) -> dict:
    return {
        "answer": response.answer,
        "status": response.status,
        "failed_stage": response.failed_stage,
        "timings": dict(response.timings),
        "evidence": evidence_to_wire(response.evidence),
    }
