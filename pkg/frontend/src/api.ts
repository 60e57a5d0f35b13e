// Typed client for the evaluation service JSON API.

export interface TrialPoem {
  label: string;
  lines: string[];
}

export interface TrialProgress {
  completed: number;
  total: number;
}

export interface TrialPayload {
  trial_id: string;
  cipai_name: string;
  theme: string;
  poems: TrialPoem[];
  progress: TrialProgress;
}

export type NextTrialResponse =
  | { trial: TrialPayload }
  | { exhausted: true; completed: number };

export type Position = "First" | "Second";

export interface RevealResponse {
  trial_id: string;
  human: Position;
  correct: boolean;
}

export interface Ratings {
  thematic_faithfulness: number;
  artistic_merit: number;
  overall_quality: number;
}

export interface RegisterResponse {
  evaluator_id: string;
  total_pairs: number;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `network error: ${String(err)}`);
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON body; detail stays generic
  }
  if (!response.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : `HTTP ${response.status}`;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

function post<T>(url: string, payload: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export class ApiClient {
  constructor(private baseUrl = "") {}

  register(evaluatorId: string): Promise<RegisterResponse> {
    return post(`${this.baseUrl}/api/evaluators`, { evaluator_id: evaluatorId });
  }

  nextTrial(evaluatorId: string): Promise<NextTrialResponse> {
    const query = encodeURIComponent(evaluatorId);
    return request(`${this.baseUrl}/api/trials/next?evaluator=${query}`);
  }

  submitChoice(
    trialId: string,
    choice: Position,
    confidence: number,
  ): Promise<RevealResponse> {
    return post(`${this.baseUrl}/api/trials/${trialId}/choice`, {
      choice,
      confidence,
    });
  }

  submitRatings(trialId: string, ratings: Ratings): Promise<unknown> {
    return post(`${this.baseUrl}/api/trials/${trialId}/ratings`, ratings);
  }
}
