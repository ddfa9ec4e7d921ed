/** Thin typed client over the annotation service HTTP+JSON API. */

import type {
  JudgmentAck,
  NextHitResponse,
  Progress,
  ScoresResponse,
  SessionCreated,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const text = await response.text();
    if (!response.ok) {
      // Error bodies are {"detail": ...}; surface the detail verbatim.
      let detail = text;
      try {
        const body = JSON.parse(text);
        if (typeof body.detail === "string") detail = body.detail;
        else if (body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        /* non-JSON body: keep raw text */
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(text) as T;
  }

  createSession(body: {
    items: { item_id: string; payload: string; oracle_value?: number }[];
    config: Record<string, unknown>;
    iterations?: number;
    hits_per_iteration?: number | null;
    seed?: number;
    lease_timeout?: number;
  }): Promise<SessionCreated> {
    return this.request("/api/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  nextHit(sessionId: string, annotatorId: string): Promise<NextHitResponse> {
    const annotator = encodeURIComponent(annotatorId);
    return this.request(
      `/api/sessions/${encodeURIComponent(sessionId)}/next-hit?annotator=${annotator}`,
    );
  }

  submitJudgment(
    sessionId: string,
    hitId: string,
    annotatorId: string,
    scores: number[],
  ): Promise<JudgmentAck> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}/judgments`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ hit_id: hitId, annotator_id: annotatorId, scores }),
    });
  }

  getScores(sessionId: string): Promise<ScoresResponse> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}/scores`);
  }

  getProgress(sessionId: string): Promise<Progress> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}/progress`);
  }
}
