// Thin typed client for the annotation service wire API.

import type {
  Meta,
  NextItemResponse,
  SessionSummary,
  SubmitOutcome,
  SubmitResponseBody,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Network-level failure (request never got an HTTP response). Retryable. */
export class NetworkError extends Error {}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        headers: { "Content-Type": "application/json" },
        ...init,
      });
    } catch (err) {
      throw new NetworkError(String(err));
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, body.detail ?? response.statusText);
    }
    return body as T;
  }

  meta(): Promise<Meta> {
    return this.request<Meta>("/api/meta");
  }

  createSession(participantId: string): Promise<SessionSummary> {
    return this.request<SessionSummary>("/api/sessions", {
      method: "POST",
      body: JSON.stringify({ participant_id: participantId }),
    });
  }

  nextItem(sessionId: string): Promise<NextItemResponse> {
    return this.request<NextItemResponse>(`/api/sessions/${sessionId}/next`);
  }

  submitResponse(
    sessionId: string,
    body: SubmitResponseBody,
  ): Promise<{ outcome: SubmitOutcome }> {
    return this.request<{ outcome: SubmitOutcome }>(
      `/api/sessions/${sessionId}/responses`,
      { method: "POST", body: JSON.stringify(body) },
    );
  }
}
