import type { AskOptions, AskResponse } from "./types.js";

export type PanelResult = {
  kind: string;
  response: AskResponse;
};

export type HistoryEntry = {
  question: string;
  results: PanelResult[];
};

export type SubmitOutcome =
  | { ok: true; entry: HistoryEntry }
  | { ok: false; error: string };

export type AskFn = (
  question: string,
  pipelineKind: string,
  options: AskOptions
) => Promise<AskResponse>;

// Session state for the page. History is append-only: entries are added when
// a submission fully succeeds and never mutated afterwards, so re-rendering
// an old entry is a pure function of the stored responses. Submissions are
// queued so only one is in flight at a time; the asks inside one submission
// (one per selected pipeline) run together.
export class UiSession {
  private readonly entries: HistoryEntry[] = [];
  private queue: Promise<unknown> = Promise.resolve();

  constructor(private readonly ask: AskFn) {}

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  submit(question: string, kinds: string[], options: AskOptions = {}): Promise<SubmitOutcome> {
    const trimmed = question.trim();
    if (!trimmed) {
      return Promise.resolve({ ok: false, error: "enter a question first" });
    }
    if (kinds.length === 0) {
      return Promise.resolve({ ok: false, error: "select at least one pipeline" });
    }
    const run = () => this.runSubmission(trimmed, kinds, options);
    const outcome = this.queue.then(run, run);
    this.queue = outcome;
    return outcome;
  }

  private async runSubmission(
    question: string,
    kinds: string[],
    options: AskOptions
  ): Promise<SubmitOutcome> {
    let responses: AskResponse[];
    try {
      responses = await Promise.all(kinds.map((kind) => this.ask(question, kind, options)));
    } catch (error) {
      return { ok: false, error: error instanceof Error ? error.message : String(error) };
    }
    const entry: HistoryEntry = {
      question,
      results: kinds.map((kind, index) => ({ kind, response: responses[index] })),
    };
    this.entries.push(entry);
    return { ok: true, entry };
  }
}
