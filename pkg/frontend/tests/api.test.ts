import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, type FetchLike } from "../src/api.js";
import { loadFixture } from "./helpers.js";
import type { AskResponse } from "../src/types.js";

const hybrid = loadFixture<AskResponse>("ask_pink1_hybrid.json");
const pipelines = loadFixture<unknown[]>("pipelines.json");
const health = loadFixture<Record<string, unknown>>("health.json");

type Call = { input: string; init?: Parameters<FetchLike>[1] };

function stub(status: number, payload: unknown): { fetch: FetchLike; calls: Call[] } {
  const calls: Call[] = [];
  const fetch: FetchLike = async (input, init) => {
    calls.push({ input, init });
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => payload,
    };
  };
  return { fetch, calls };
}

describe("ApiClient.ask", () => {
  it("posts the question to /api/ask", async () => {
    const { fetch, calls } = stub(200, hybrid);
    const client = new ApiClient("", fetch);
    const response = await client.ask("Which diseases are associated with the gene pink1?", "hybrid");
    expect(response).toEqual(hybrid);
    expect(calls).toHaveLength(1);
    expect(calls[0].input).toBe("/api/ask");
    expect(calls[0].init?.method).toBe("POST");
    expect(calls[0].init?.headers).toEqual({ "Content-Type": "application/json" });
    expect(JSON.parse(calls[0].init?.body ?? "")).toEqual({
      question: "Which diseases are associated with the gene pink1?",
      pipeline_kind: "hybrid",
      options: {},
    });
  });

  it("passes options and the request id through", async () => {
    const { fetch, calls } = stub(200, hybrid);
    const client = new ApiClient("", fetch);
    await client.ask("q", "hybrid", { compact: true }, "req-7");
    const body = JSON.parse(calls[0].init?.body ?? "");
    expect(body.options).toEqual({ compact: true });
    expect(body.id).toBe("req-7");
  });

  it("joins a base URL without doubling slashes", async () => {
    const { fetch, calls } = stub(200, hybrid);
    const client = new ApiClient("http://localhost:8000/", fetch);
    await client.ask("q", "hybrid");
    expect(calls[0].input).toBe("http://localhost:8000/api/ask");
  });

  it("surfaces the server detail on an error status", async () => {
    const { fetch } = stub(400, { detail: "question: must not be empty" });
    const client = new ApiClient("", fetch);
    const error = await client.ask("", "hybrid").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.message).toBe("question: must not be empty");
    expect(error.status).toBe(400);
  });

  it("falls back to the status code when there is no detail", async () => {
    const { fetch } = stub(502, "gateway");
    const client = new ApiClient("", fetch);
    const error = await client.ask("q", "hybrid").catch((e) => e);
    expect(error.message).toBe("ask failed with status 502");
  });

  it("wraps transport failures", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    const error = await client.ask("q", "hybrid").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.message).toContain("service unreachable");
    expect(error.status).toBeUndefined();
  });
});

describe("ApiClient reads", () => {
  it("fetches the pipeline catalog", async () => {
    const { fetch, calls } = stub(200, pipelines);
    const client = new ApiClient("", fetch);
    expect(await client.pipelines()).toEqual(pipelines);
    expect(calls[0].input).toBe("/api/pipelines");
    expect(calls[0].init).toBeUndefined();
  });

  it("fetches health", async () => {
    const { fetch, calls } = stub(200, health);
    const client = new ApiClient("", fetch);
    expect(await client.health()).toEqual(health);
    expect(calls[0].input).toBe("/api/health");
  });

  it("wraps transport failures on reads too", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("refused");
    });
    const error = await client.health().catch((e) => e);
    expect(error.message).toContain("service unreachable");
  });
});
