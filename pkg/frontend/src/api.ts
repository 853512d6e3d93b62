import type { AskOptions, AskResponse, HealthInfo, PipelineInfo } from "./types.js";

// Minimal fetch shape so tests can pass a stub without pulling in DOM types.
export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

async function detailOf(response: { json(): Promise<unknown> }): Promise<string | null> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    return typeof body.detail === "string" ? body.detail : null;
  } catch {
    return null;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init)
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async get<T>(path: string): Promise<T> {
    let response;
    try {
      response = await this.fetchFn(this.url(path));
    } catch (error) {
      throw new ApiError(`service unreachable: ${String(error)}`);
    }
    if (!response.ok) {
      const detail = await detailOf(response);
      throw new ApiError(detail ?? `request failed with status ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }

  async ask(
    question: string,
    pipelineKind: string,
    options: AskOptions = {},
    id?: string
  ): Promise<AskResponse> {
    const payload: Record<string, unknown> = {
      question,
      pipeline_kind: pipelineKind,
      options,
    };
    if (id !== undefined) {
      payload.id = id;
    }
    let response;
    try {
      response = await this.fetchFn(this.url("/api/ask"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (error) {
      throw new ApiError(`service unreachable: ${String(error)}`);
    }
    if (!response.ok) {
      const detail = await detailOf(response);
      throw new ApiError(detail ?? `ask failed with status ${response.status}`, response.status);
    }
    return (await response.json()) as AskResponse;
  }

  pipelines(): Promise<PipelineInfo[]> {
    return this.get<PipelineInfo[]>("/api/pipelines");
  }

  health(): Promise<HealthInfo> {
    return this.get<HealthInfo>("/api/health");
  }
}
