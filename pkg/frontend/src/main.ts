import { ApiClient } from "./api.js";
import { attachPanZoom } from "./graphview.js";
import {
  renderErrorBanner,
  renderHealth,
  renderHistory,
  renderRowsTable,
  type SortState,
} from "./render.js";
import { UiSession } from "./state.js";
import { escapeHtml } from "./highlight.js";
import type { AskOptions, PipelineInfo } from "./types.js";

declare global {
  interface Window {
    GRAPHQA_SERVICE_URL?: string;
  }
}

const serviceUrl = window.GRAPHQA_SERVICE_URL ?? "";
const client = new ApiClient(serviceUrl);
const session = new UiSession((question, kind, options) =>
  client.ask(question, kind, options)
);

const form = document.querySelector<HTMLFormElement>("#ask-form")!;
const questionInput = document.querySelector<HTMLInputElement>("#question")!;
const submitButton = document.querySelector<HTMLButtonElement>("#submit")!;
const pipelineBox = document.querySelector<HTMLElement>("#pipelines")!;
const bannerHost = document.querySelector<HTMLElement>("#banner")!;
const historyHost = document.querySelector<HTMLElement>("#history")!;
const healthHost = document.querySelector<HTMLElement>("#health")!;

// Display-only sort order per rows table, reset whenever history re-renders.
const sortStates = new Map<string, SortState>();

function renderAll(): void {
  sortStates.clear();
  historyHost.innerHTML = renderHistory(session.history);
  for (const svg of historyHost.querySelectorAll<SVGSVGElement>("svg.subgraph-svg")) {
    attachPanZoom(svg);
  }
  historyHost.scrollTop = historyHost.scrollHeight;
}

function showBanner(message: string): void {
  bannerHost.innerHTML = renderErrorBanner(message);
}

function clearBanner(): void {
  bannerHost.innerHTML = "";
}

function selectedKinds(): string[] {
  const checked = pipelineBox.querySelectorAll<HTMLInputElement>("input:checked");
  return Array.from(checked, (input) => input.value);
}

function renderPipelineChoices(pipelines: PipelineInfo[]): void {
  pipelineBox.innerHTML = pipelines
    .map(
      (pipeline) =>
        `<label><input type="checkbox" value="${escapeHtml(pipeline.kind)}" checked> ${escapeHtml(
          pipeline.kind
        )}</label>`
    )
    .join("");
}

async function loadService(): Promise<void> {
  try {
    const [pipelines, health] = await Promise.all([client.pipelines(), client.health()]);
    renderPipelineChoices(pipelines);
    healthHost.innerHTML = renderHealth(health);
  } catch (error) {
    showBanner(error instanceof Error ? error.message : String(error));
    healthHost.innerHTML = renderHealth({ status: "down" });
  }
}

form.addEventListener("submit", (event) => {
  event.preventDefault();
  void submit();
});

async function submit(): Promise<void> {
  clearBanner();
  const question = questionInput.value;
  const options: AskOptions = {};
  submitButton.disabled = true;
  try {
    const outcome = await session.submit(question, selectedKinds(), options);
    if (outcome.ok) {
      questionInput.value = "";
      renderAll();
    } else {
      // The question stays in the input so the user can retry as-is.
      showBanner(outcome.error);
    }
  } finally {
    submitButton.disabled = false;
    questionInput.focus();
  }
}

// Column-header clicks reorder the displayed rows. The payload itself is
// never touched; we re-render the one table from the stored response.
historyHost.addEventListener("click", (event) => {
  const th = (event.target as Element).closest<HTMLElement>("th[data-col]");
  if (!th) {
    return;
  }
  const tableEl = th.closest("table");
  const panel = th.closest<HTMLElement>(".answer-panel");
  const entryEl = th.closest<HTMLElement>(".history-entry");
  if (!tableEl || !panel || !entryEl) {
    return;
  }
  const entryIndex = Number(entryEl.dataset.entry);
  const kind = panel.dataset.pipeline ?? "";
  const columnIndex = Number(th.dataset.col);
  const entry = session.history[entryIndex];
  const result = entry?.results.find((item) => item.kind === kind);
  if (!result) {
    return;
  }
  const key = `${entryIndex}|${kind}`;
  const previous = sortStates.get(key);
  const direction =
    previous && previous.columnIndex === columnIndex && previous.direction === "asc"
      ? "desc"
      : "asc";
  const state: SortState = { columnIndex, direction };
  sortStates.set(key, state);
  tableEl.outerHTML = renderRowsTable(result.response.evidence.graph_rows, state);
});

void loadService();
