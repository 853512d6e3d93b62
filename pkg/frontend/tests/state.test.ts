import { describe, expect, it } from "vitest";

import { UiSession } from "../src/state.js";
import type { AskResponse } from "../src/types.js";
import { loadFixture } from "./helpers.js";

const hybrid = loadFixture<AskResponse>("ask_pink1_hybrid.json");
const llmOnly = loadFixture<AskResponse>("ask_pink1_llm_only.json");

const QUESTION = "Which diseases are associated with the gene pink1?";

function respond(kind: string): AskResponse {
  return kind === "hybrid" ? hybrid : llmOnly;
}

type Deferred = {
  promise: Promise<AskResponse>;
  resolve: (value: AskResponse) => void;
  reject: (reason: Error) => void;
};

function deferred(): Deferred {
  let resolve!: (value: AskResponse) => void;
  let reject!: (reason: Error) => void;
  const promise = new Promise<AskResponse>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

describe("UiSession", () => {
  it("records one history entry per successful submission", async () => {
    const calls: string[] = [];
    const session = new UiSession(async (question, kind) => {
      calls.push(`${kind}:${question}`);
      return respond(kind);
    });

    const outcome = await session.submit(QUESTION, ["hybrid", "llm_only"]);
    expect(outcome.ok).toBe(true);
    expect(calls).toEqual([`hybrid:${QUESTION}`, `llm_only:${QUESTION}`]);
    expect(session.history).toHaveLength(1);
    const entry = session.history[0];
    expect(entry.question).toBe(QUESTION);
    expect(entry.results.map((r) => r.kind)).toEqual(["hybrid", "llm_only"]);
    expect(entry.results[0].response).toBe(hybrid);
  });

  it("rejects an empty question without calling the service", async () => {
    let calls = 0;
    const session = new UiSession(async () => {
      calls += 1;
      return hybrid;
    });
    const outcome = await session.submit("   ", ["hybrid"]);
    expect(outcome).toEqual({ ok: false, error: "enter a question first" });
    expect(calls).toBe(0);
    expect(session.history).toHaveLength(0);
  });

  it("requires at least one pipeline", async () => {
    const session = new UiSession(async () => hybrid);
    const outcome = await session.submit(QUESTION, []);
    expect(outcome).toEqual({ ok: false, error: "select at least one pipeline" });
  });

  it("keeps history untouched when a request fails", async () => {
    const session = new UiSession(async (_q, kind) => {
      if (kind === "llm_only") {
        throw new Error("service unreachable: boom");
      }
      return hybrid;
    });
    const outcome = await session.submit(QUESTION, ["hybrid", "llm_only"]);
    expect(outcome).toEqual({ ok: false, error: "service unreachable: boom" });
    expect(session.history).toHaveLength(0);
  });

  it("queues concurrent submissions instead of interleaving them", async () => {
    const gates: Deferred[] = [];
    const issued: string[] = [];
    const session = new UiSession((question) => {
      issued.push(question);
      const gate = deferred();
      gates.push(gate);
      return gate.promise;
    });

    const first = session.submit("first?", ["hybrid"]);
    const second = session.submit("second?", ["hybrid"]);
    await Promise.resolve();

    // The second submission waits its turn; nothing for it is in flight yet.
    expect(issued).toEqual(["first?"]);

    gates[0].resolve(hybrid);
    await first;
    expect(issued).toEqual(["first?", "second?"]);

    gates[1].resolve(llmOnly);
    await second;
    expect(session.history.map((e) => e.question)).toEqual(["first?", "second?"]);
  });

  it("lets the queue continue after a failure", async () => {
    const gates: Deferred[] = [];
    const session = new UiSession(() => {
      const gate = deferred();
      gates.push(gate);
      return gate.promise;
    });

    const first = session.submit("first?", ["hybrid"]);
    const second = session.submit("second?", ["hybrid"]);
    await Promise.resolve();

    gates[0].reject(new Error("timeout"));
    expect(await first).toEqual({ ok: false, error: "timeout" });

    gates[1].resolve(hybrid);
    expect(await second).toMatchObject({ ok: true });
    expect(session.history.map((e) => e.question)).toEqual(["second?"]);
  });

  it("trims the question before submitting", async () => {
    const seen: string[] = [];
    const session = new UiSession(async (question) => {
      seen.push(question);
      return hybrid;
    });
    await session.submit(`  ${QUESTION}  `, ["hybrid"]);
    expect(seen).toEqual([QUESTION]);
    expect(session.history[0].question).toBe(QUESTION);
  });

  it("exposes history without re-issuing requests on read", async () => {
    let calls = 0;
    const session = new UiSession(async () => {
      calls += 1;
      return hybrid;
    });
    await session.submit(QUESTION, ["hybrid"]);
    const snapshotA = JSON.stringify(session.history);
    const snapshotB = JSON.stringify(session.history);
    expect(snapshotA).toBe(snapshotB);
    expect(calls).toBe(1);
  });
});
