/**
 * Typed fetch client for the decision-bias service.
 *
 * One method per endpoint; non-2xx responses are raised as ApiError
 * carrying the service's structured error envelope.  The fetch
 * implementation is injectable so tests can run against a scripted
 * in-memory server.
 */

import type {
  ChoiceResponse,
  ErrorEnvelope,
  ProblemCreated,
  ProblemDto,
  RatingsResponse,
  RevisionResponse,
  SessionCreated,
  SessionView,
  StepResponse,
  ValidationIssue,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: unknown;

  constructor(status: number, code: string, message: string, details?: unknown) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.details = details;
  }

  /** Field-level issues from a validation failure, if the server sent any. */
  get issues(): ValidationIssue[] {
    const details = this.details as { issues?: ValidationIssue[] } | undefined;
    return details?.issues ?? [];
  }
}

/** The revision step: either switch to an alternative or keep the choice. */
export type Revision = { alternativeId: string } | { confirm: true };

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const payload: unknown = await response.json().catch(() => null);
    if (!response.ok) {
      const error = (payload as ErrorEnvelope | null)?.error;
      throw new ApiError(
        response.status,
        error?.code ?? "UnknownError",
        error?.message ?? `request failed with status ${response.status}`,
        error?.details,
      );
    }
    return payload as T;
  }

  createProblem(problem: ProblemDto): Promise<ProblemCreated> {
    return this.request("POST", "/api/problems", problem);
  }

  listProblems(): Promise<{ problems: ProblemDto[] }> {
    return this.request("GET", "/api/problems");
  }

  getProblem(problemId: string): Promise<ProblemDto> {
    return this.request("GET", `/api/problems/${encodeURIComponent(problemId)}`);
  }

  createSession(agentId: string, problemId: string): Promise<SessionCreated> {
    return this.request("POST", "/api/sessions", {
      agent_id: agentId,
      problem_id: problemId,
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  submitChoice(sessionId: string, alternativeId: string): Promise<ChoiceResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(sessionId)}/choice`, {
      alternative_id: alternativeId,
    });
  }

  submitRatings(sessionId: string, ratings: Record<string, number>): Promise<RatingsResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(sessionId)}/ratings`, {
      ratings,
    });
  }

  acknowledgeAlert(sessionId: string): Promise<StepResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(sessionId)}/acknowledge`);
  }

  submitAgreement(sessionId: string, q1: number, q2: number): Promise<StepResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(sessionId)}/agreement`, {
      q1_bias_agreement: q1,
      q2_insight_agreement: q2,
    });
  }

  submitRevision(sessionId: string, revision: Revision): Promise<RevisionResponse> {
    const body =
      "confirm" in revision ? { confirm: true } : { alternative_id: revision.alternativeId };
    return this.request("POST", `/api/sessions/${encodeURIComponent(sessionId)}/revision`, body);
  }
}
