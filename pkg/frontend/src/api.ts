/**
 * Typed client for the elicitation service's JSON API.
 *
 * The client is a thin pass-through: every number the UI displays comes out
 * of these response payloads untouched, so the browser never re-derives any
 * domain quantity.
 */

export interface CreateSessionRequest {
  depth?: number;
  respondent?: string;
  wave?: string;
  cutoffs?: [number, number];
  seed?: number;
}

export interface CreateSessionResponse {
  session_id: string;
  commitment: string;
  total_questions: number;
  depth: number;
  respondent: string;
  wave: string;
  stake_text: string;
}

export interface Question {
  ordinal: number;
  event: string;
  description: string;
  lottery_percent: number;
  stake_text: string;
}

export interface NextResponse {
  done: boolean;
  question?: Question;
  answered: number;
  total: number;
}

export interface ChoiceResponse {
  answered: number;
  remaining: number;
  done: boolean;
}

export interface IntervalPayload {
  event: string;
  lb: number;
  ub: number;
  midpoint: number;
}

export interface ResultResponse {
  intervals: IntervalPayload[];
  seed: number;
  commitment: string;
  payout: {
    question: number;
    event: string;
    lottery_percent: number;
    chose_bet: boolean;
    outcome: string;
  };
  indices: { aversion: number; sensitivity: number };
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      const detail = (body as { detail?: { code?: string; message?: string } })?.detail;
      throw new ApiError(
        response.status,
        detail?.code ?? "unknown_error",
        detail?.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }

  createSession(request: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  next(sessionId: string): Promise<NextResponse> {
    return this.request(`/sessions/${sessionId}/next`);
  }

  postChoice(sessionId: string, question: number, choseBet: boolean): Promise<ChoiceResponse> {
    return this.request(`/sessions/${sessionId}/choices`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ question, chose_bet: choseBet }),
    });
  }

  result(sessionId: string): Promise<ResultResponse> {
    return this.request(`/sessions/${sessionId}/result`);
  }

  health(): Promise<{ status: string; sessions: number }> {
    return this.request("/healthz");
  }
}
