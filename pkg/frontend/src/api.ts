// Thin typed client over the session service JSON API. Every response
// body passes through `record` so tests can audit exactly what the
// server sent (the hidden-state audit greps this log).

export interface CatalogEntry {
  id: string;
  family: string;
  difficulty: string;
  description: string;
  default_test_count: number;
}

export interface BudgetBody {
  exploration_turns: number;
  shots_per_sample: number;
  feedback_mode?: "Instant" | "Deferred";
}

export interface CreateResponse {
  session_id: string;
  owner_token: string;
  preamble: string;
  stage: string;
  turns_remaining: number;
  test_count: number;
}

export interface QueryResponse {
  feedback: string;
  stage: string;
  turns_remaining: number;
}

export interface Verdict {
  sample_index: number;
  correct: boolean;
  attempts_used: number;
  score?: number;
}

export interface Report {
  env_id: string;
  accuracy: number;
  per_sample: Verdict[];
  budget: BudgetBody & { feedback_mode: string };
}

export interface AnswerResponse {
  feedback: string;
  stage: string;
  retry: boolean;
  verdict: Verdict | null;
  next_sample: number | null;
  turns_remaining: number;
  report?: Report;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  readonly responseLog: string[] = [];

  constructor(private baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private record<T>(body: T): T {
    this.responseLog.push(JSON.stringify(body));
    return body;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, `connection error: ${String(err)}`);
    }
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).detail ?? text;
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(response.status, `HTTP ${response.status}: ${detail}`);
    }
    return this.record(JSON.parse(text) as T);
  }

  listEnvironments(family?: string, difficulty?: string): Promise<CatalogEntry[]> {
    const params = new URLSearchParams();
    if (family) params.set("family", family);
    if (difficulty) params.set("difficulty", difficulty);
    const suffix = params.size ? `?${params}` : "";
    return this.request<CatalogEntry[]>(`/envs${suffix}`);
  }

  createSession(envId: string, budget: BudgetBody, seed: number): Promise<CreateResponse> {
    return this.request<CreateResponse>("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ env_id: envId, budget, seed }),
    });
  }

  private authed(token: string): Record<string, string> {
    return {
      "Content-Type": "application/json",
      Authorization: `Bearer ${token}`,
    };
  }

  query(sessionId: string, token: string, text: string): Promise<QueryResponse> {
    return this.request<QueryResponse>(`/sessions/${sessionId}/query`, {
      method: "POST",
      headers: this.authed(token),
      body: JSON.stringify({ text }),
    });
  }

  answer(sessionId: string, token: string, text: string): Promise<AnswerResponse> {
    return this.request<AnswerResponse>(`/sessions/${sessionId}/answer`, {
      method: "POST",
      headers: this.authed(token),
      body: JSON.stringify({ text }),
    });
  }
}
