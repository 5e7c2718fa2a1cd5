// Thin typed client for the session service. Every call either resolves with
// the parsed response body or throws ApiError carrying the server's error
// code, so the UI can show a toast without re-parsing anything.

import type {
  BenchmarkBody,
  BenchmarkReport,
  EventResult,
  SessionCreateBody,
  SessionSnapshot,
  TeacherEventBody,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let code = `HTTP_${response.status}`;
  let message = response.statusText || code;
  try {
    const body = await response.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the HTTP fallback
  }
  return new ApiError(response.status, code, message);
}

export class SessionApi {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  streamUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/stream`;
  }

  async createSession(body: SessionCreateBody = {}): Promise<SessionSnapshot> {
    return this.request("POST", "/sessions", body);
  }

  async getSnapshot(sessionId: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  async submitEvent(sessionId: string, event: TeacherEventBody): Promise<EventResult> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/events`, event);
  }

  async runBenchmark(body: BenchmarkBody = {}): Promise<BenchmarkReport> {
    return this.request("POST", "/benchmarks", body);
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchFn(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }
}
