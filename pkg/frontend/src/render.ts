import { escapeHtml, highlightCypher } from "./highlight.js";
import { renderSubgraphSvg } from "./graphview.js";
import type {
  AskResponse,
  CellWire,
  ChangeLogWire,
  EvidenceWire,
  HealthInfo,
  ResultTableWire,
} from "./types.js";
import type { HistoryEntry } from "./state.js";

// Every renderer here is a pure function from payload to markup string.
// Nothing below issues a request or stores state, which is what makes
// re-rendering history entries safe.

export function formatCell(cell: CellWire): string {
  if (cell === null) {
    return "null";
  }
  if (typeof cell === "boolean") {
    return cell ? "true" : "false";
  }
  if (typeof cell === "object") {
    if (cell.kind === "node") {
      return `${cell.properties.name ?? cell.id} [${cell.label}]`;
    }
    return `${cell.source} -${cell.rel_type}-> ${cell.target}`;
  }
  return String(cell);
}

function cellRank(cell: CellWire): number {
  if (cell === null) return 0;
  if (typeof cell === "boolean") return 1;
  if (typeof cell === "number") return 2;
  if (typeof cell === "string") return 3;
  return cell.kind === "node" ? 4 : 5;
}

export type SortDirection = "asc" | "desc";

export function sortRows(
  rows: CellWire[][],
  columnIndex: number,
  direction: SortDirection = "asc"
): CellWire[][] {
  const sign = direction === "asc" ? 1 : -1;
  return rows
    .map((row, index) => ({ row, index }))
    .sort((a, b) => {
      const left = a.row[columnIndex];
      const right = b.row[columnIndex];
      const rankDiff = cellRank(left) - cellRank(right);
      if (rankDiff !== 0) {
        return sign * rankDiff;
      }
      if (typeof left === "number" && typeof right === "number") {
        return sign * (left - right) || a.index - b.index;
      }
      const byText = formatCell(left).localeCompare(formatCell(right));
      return sign * byText || a.index - b.index;
    })
    .map((item) => item.row);
}

export type SortState = { columnIndex: number; direction: SortDirection };

export function renderRowsTable(table: ResultTableWire, sort?: SortState): string {
  if (table.columns.length === 0 && table.rows.length === 0) {
    return "";
  }
  const rows = sort ? sortRows(table.rows, sort.columnIndex, sort.direction) : table.rows;
  const header = table.columns
    .map((column, index) => {
      const arrow =
        sort && sort.columnIndex === index ? (sort.direction === "asc" ? " ↑" : " ↓") : "";
      return `<th data-col="${index}">${escapeHtml(column)}${arrow}</th>`;
    })
    .join("");
  const body = rows
    .map(
      (row) =>
        `<tr>${row.map((cell) => `<td>${escapeHtml(formatCell(cell))}</td>`).join("")}</tr>`
    )
    .join("");
  return `<table class="rows-table">
    <thead><tr>${header}</tr></thead>
    <tbody>${body}</tbody>
  </table>`;
}

export function renderChangeLog(log: ChangeLogWire): string {
  if (!log || (log.entries.length === 0 && log.notes.length === 0)) {
    return "";
  }
  const entries = log.entries
    .map(
      (entry) =>
        `<li><code>${escapeHtml(entry.step)}</code>: ` +
        `<del>${escapeHtml(entry.before)}</del> → <ins>${escapeHtml(entry.after)}</ins>` +
        ` <span class="muted">at ${entry.position}</span></li>`
    )
    .join("");
  const notes = log.notes
    .map((note) => `<li class="muted">${escapeHtml(note)}</li>`)
    .join("");
  return `<div class="change-log">
    <h4>Preprocessing changes</h4>
    <ul>${entries}${notes}</ul>
  </div>`;
}

function cypherBlock(role: string, title: string, text: string): string {
  return `<div class="cypher-block">
    <h4>${escapeHtml(title)}</h4>
    <pre class="cypher" data-role="${role}">${highlightCypher(text)}</pre>
  </div>`;
}

export function renderCypherPanel(evidence: EvidenceWire): string {
  if (evidence.generated_cypher === null) {
    return "";
  }
  let blocks = cypherBlock("generated-cypher", "Generated", evidence.generated_cypher);
  if (
    evidence.preprocessed_cypher !== null &&
    evidence.preprocessed_cypher !== evidence.generated_cypher
  ) {
    blocks += cypherBlock("preprocessed-cypher", "Preprocessed", evidence.preprocessed_cypher);
  }
  return `<details class="panel panel-cypher" open>
    <summary>Cypher query</summary>
    ${blocks}
    ${renderChangeLog(evidence.change_log)}
  </details>`;
}

export function renderRowsPanel(evidence: EvidenceWire): string {
  const table = renderRowsTable(evidence.graph_rows);
  if (!table) {
    return "";
  }
  const count = evidence.graph_rows.rows.length;
  return `<details class="panel panel-rows" open>
    <summary>Graph rows <span class="badge">${count} row${count === 1 ? "" : "s"}</span></summary>
    ${table}
  </details>`;
}

export function renderSubgraphPanel(evidence: EvidenceWire): string {
  const subgraph = evidence.subgraph;
  if (!subgraph || subgraph.nodes.length === 0) {
    return "";
  }
  const badge = `${subgraph.nodes.length} nodes / ${subgraph.edges.length} edges`;
  return `<details class="panel panel-subgraph" open>
    <summary>Evidence subgraph <span class="badge" data-role="subgraph-badge">${escapeHtml(badge)}</span></summary>
    ${renderSubgraphSvg(subgraph)}
  </details>`;
}

function renderMentions(evidence: EvidenceWire): string {
  if (evidence.entity_mentions.length === 0) {
    return "";
  }
  const items = evidence.entity_mentions
    .map(
      (mention) =>
        `<li>"${escapeHtml(mention.surface)}" → ` +
        `<strong>${escapeHtml(mention.preferred_term)}</strong> ` +
        `<span class="muted">(${escapeHtml(mention.category)})</span></li>`
    )
    .join("");
  return `<details class="panel panel-mentions">
    <summary>Recognized entities <span class="badge">${evidence.entity_mentions.length}</span></summary>
    <ul>${items}</ul>
  </details>`;
}

export function renderEvidence(response: AskResponse): string {
  const evidence = response.evidence;
  if (evidence.schema_error !== null) {
    return `<section class="panel panel-explanation">
      <h4>Out of scope</h4>
      <p>${escapeHtml(evidence.schema_error.explanation)}</p>
    </section>`;
  }
  return [
    renderCypherPanel(evidence),
    renderRowsPanel(evidence),
    renderSubgraphPanel(evidence),
    renderMentions(evidence),
  ].join("");
}

const PIPELINE_TITLES: Record<string, string> = {
  hybrid: "Graph hybrid",
  llm_only: "LLM only",
};

export function renderAnswerPanel(kind: string, response: AskResponse): string {
  const title = PIPELINE_TITLES[kind] ?? kind;
  const statusTag =
    response.status === "answered"
      ? ""
      : `<span class="status status-${escapeHtml(response.status)}">${escapeHtml(response.status)}</span>`;
  return `<section class="answer-panel" data-pipeline="${escapeHtml(kind)}">
    <header><h3>${escapeHtml(title)}</h3>${statusTag}</header>
    <p class="answer-text">${escapeHtml(response.answer)}</p>
    <div class="evidence">${renderEvidence(response)}</div>
  </section>`;
}

export function renderHistoryEntry(entry: HistoryEntry, index: number): string {
  const panels = entry.results
    .map((result) => renderAnswerPanel(result.kind, result.response))
    .join("");
  return `<article class="history-entry" data-entry="${index}">
    <h2 class="question">${escapeHtml(entry.question)}</h2>
    <div class="answer-row">${panels}</div>
  </article>`;
}

export function renderHistory(entries: readonly HistoryEntry[]): string {
  return entries.map((entry, index) => renderHistoryEntry(entry, index)).join("");
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner banner-error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderHealth(health: HealthInfo): string {
  if (health.status !== "ok") {
    return `<span class="health health-down">service unavailable</span>`;
  }
  const reachable = health.backend_reachable ? "reachable" : "unreachable";
  return `<span class="health health-ok">graph: ${health.nodes} nodes / ${health.edges} edges · backend ${escapeHtml(
    health.backend ?? "?"
  )} (${reachable})</span>`;
}
