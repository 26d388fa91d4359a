/**
 * View-model state machine for one decision session.
 *
 * The machine decides which screen is on display and which actions are
 * legal there; everything else is server-owned.  Session state is only
 * ever assigned from API responses — the client never advances it on
 * its own, computes no expected values, weights, or verdicts, and holds
 * alert or assessment content only when a response carried it.  While
 * the alert screen is up, acknowledging it is the only action the
 * machine will even send to the server.
 *
 * A 409 from the service means the session moved on elsewhere (another
 * tab, a stale view): the machine re-fetches the server's view, flags
 * an out-of-order notice for the UI, and lands on whatever screen the
 * server says is current.
 */

import { ApiClient, ApiError, Revision } from "./api.js";
import type {
  AlertPayload,
  AssessmentPayload,
  FlowMode,
  ProblemDto,
  SessionState,
  ValidationIssue,
} from "./types.js";
import { ProblemDraft, toWireProblem, validateDraft } from "./validation.js";

export type Screen =
  | "entry"
  | "choice"
  | "pre_ratings"
  | "alert"
  | "agreement"
  | "post_ratings"
  | "revision"
  | "done";

export type UiAction =
  | "create_problem"
  | "start_session"
  | "choose"
  | "rate"
  | "acknowledge"
  | "agree"
  | "revise";

/** Each service session state maps to exactly one screen. */
export const SCREEN_FOR_STATE: Record<SessionState, Screen> = {
  awaiting_choice: "choice",
  awaiting_pre_ratings: "pre_ratings",
  alerted: "alert",
  awaiting_agreement: "agreement",
  awaiting_post_ratings: "post_ratings",
  awaiting_revision: "revision",
  completed: "done",
};

/**
 * Which actions each screen offers.  This is the local gate: anything
 * else is refused before a request goes out.  On the alert screen that
 * gate is the acknowledgement requirement itself.
 */
export const ACTIONS_FOR_SCREEN: Record<Screen, readonly UiAction[]> = {
  entry: ["create_problem", "start_session"],
  choice: ["choose"],
  pre_ratings: ["rate"],
  alert: ["acknowledge"],
  agreement: ["agree"],
  post_ratings: ["rate"],
  revision: ["revise"],
  done: [],
};

/** An action attempted on a screen that does not offer it. */
export class UiFlowError extends Error {
  readonly action: UiAction;
  readonly screen: Screen;

  constructor(action: UiAction, screen: Screen) {
    super(`action '${action}' is not available on the '${screen}' screen`);
    this.name = "UiFlowError";
    this.action = action;
    this.screen = screen;
  }
}

/** Form input rejected before submission; carries field-level issues. */
export class FormValidationError extends Error {
  readonly issues: ValidationIssue[];

  constructor(issues: ValidationIssue[]) {
    super(issues.map((i) => `${i.path}: ${i.message}`).join("; "));
    this.name = "FormValidationError";
    this.issues = issues;
  }
}

export interface OutOfOrderNotice {
  message: string;
}

interface SessionStep {
  state: SessionState;
  alert?: AlertPayload;
  assessment?: AssessmentPayload;
}

export class SessionMachine {
  private readonly api: ApiClient;
  private state: SessionState | null = null;

  sessionId: string | null = null;
  flow: FlowMode | null = null;
  problem: ProblemDto | null = null;
  alert: AlertPayload | null = null;
  assessment: AssessmentPayload | null = null;
  acknowledged = false;
  awarenessBefore: 0 | 1 | null = null;
  awarenessAfter: 0 | 1 | null = null;
  chosenAlternativeId: string | null = null;
  finalAlternativeId: string | null = null;
  confirmed: boolean | null = null;
  outOfOrder: OutOfOrderNotice | null = null;

  constructor(api: ApiClient) {
    this.api = api;
  }

  get screen(): Screen {
    return this.state === null ? "entry" : SCREEN_FOR_STATE[this.state];
  }

  get sessionState(): SessionState | null {
    return this.state;
  }

  actionAllowed(action: UiAction): boolean {
    return ACTIONS_FOR_SCREEN[this.screen].includes(action);
  }

  private guard(action: UiAction): void {
    if (!this.actionAllowed(action)) {
      throw new UiFlowError(action, this.screen);
    }
  }

  // -- entry ------------------------------------------------------------

  /**
   * Validate the form locally, then create the problem.  Server-side
   * validation failures surface as the same FormValidationError the
   * local check raises, so the form renders both identically.
   */
  async createProblem(draft: ProblemDraft): Promise<string> {
    this.guard("create_problem");
    const issues = validateDraft(draft);
    if (issues.length > 0) {
      throw new FormValidationError(issues);
    }
    try {
      const created = await this.api.createProblem(toWireProblem(draft));
      return created.problem_id;
    } catch (error) {
      if (error instanceof ApiError && error.issues.length > 0) {
        throw new FormValidationError(error.issues);
      }
      throw error;
    }
  }

  listProblems(): Promise<{ problems: ProblemDto[] }> {
    return this.api.listProblems();
  }

  async startSession(agentId: string, problemId: string): Promise<void> {
    this.guard("start_session");
    const problem = await this.api.getProblem(problemId);
    const created = await this.api.createSession(agentId, problemId);
    this.problem = problem;
    this.sessionId = created.session_id;
    this.flow = created.flow;
    this.state = created.state;
  }

  // -- session steps ------------------------------------------------------

  async choose(alternativeId: string): Promise<void> {
    this.guard("choose");
    this.requireKnownAlternative(alternativeId);
    const response = await this.step(() =>
      this.api.submitChoice(this.sessionId!, alternativeId),
    );
    if (response !== null) {
      this.chosenAlternativeId = alternativeId;
      this.finalAlternativeId = alternativeId;
    }
  }

  async rate(ratings: Record<string, number>): Promise<void> {
    this.guard("rate");
    this.validateRatings(ratings);
    const phase = this.screen;
    const response = await this.step(() =>
      this.api.submitRatings(this.sessionId!, ratings),
    );
    if (response === null) {
      return;
    }
    if (phase === "pre_ratings") {
      this.awarenessBefore = response.awareness_level;
    } else {
      this.awarenessAfter = response.awareness_level;
    }
  }

  async acknowledge(): Promise<void> {
    this.guard("acknowledge");
    const response = await this.step(() => this.api.acknowledgeAlert(this.sessionId!));
    if (response !== null) {
      this.acknowledged = true;
    }
  }

  async agree(q1: number, q2: number): Promise<void> {
    this.guard("agree");
    const issues: ValidationIssue[] = [];
    for (const [name, value] of [
      ["q1_bias_agreement", q1],
      ["q2_insight_agreement", q2],
    ] as const) {
      if (!Number.isInteger(value) || value < 1 || value > 5) {
        issues.push({
          code: "RangeError",
          path: `$.${name}`,
          message: `${name} must be an integer in [1, 5]`,
        });
      }
    }
    if (issues.length > 0) {
      throw new FormValidationError(issues);
    }
    await this.step(() => this.api.submitAgreement(this.sessionId!, q1, q2));
  }

  async revise(revision: Revision): Promise<void> {
    this.guard("revise");
    if ("alternativeId" in revision) {
      this.requireKnownAlternative(revision.alternativeId);
    }
    const response = await this.step(() =>
      this.api.submitRevision(this.sessionId!, revision),
    );
    if (response !== null) {
      this.finalAlternativeId = response.final_alternative_id;
      this.confirmed = response.confirmed;
    }
  }

  // -- server re-sync -----------------------------------------------------

  /**
   * Replace the local view with the server's.  Used to restore a
   * session after a reload and to recover from out-of-order replies;
   * deliberately not gated, since it only reads.
   */
  async resync(sessionId?: string): Promise<void> {
    const id = sessionId ?? this.sessionId;
    if (id === null) {
      throw new Error("no session to re-sync");
    }
    const view = await this.api.getSession(id);
    this.sessionId = view.session_id;
    this.flow = view.flow;
    this.state = view.state;
    this.alert = view.alert;
    this.acknowledged = view.acknowledged;
    this.chosenAlternativeId = view.chosen_alternative_id;
    this.finalAlternativeId = view.final_alternative_id;
    if (this.problem === null || this.problem.id !== view.problem_id) {
      this.problem = await this.api.getProblem(view.problem_id);
    }
  }

  dismissOutOfOrder(): void {
    this.outOfOrder = null;
  }

  // -- helpers ------------------------------------------------------------

  private async step<T extends SessionStep>(call: () => Promise<T>): Promise<T | null> {
    let response: T;
    try {
      response = await call();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.outOfOrder = { message: error.message };
        await this.resync();
        return null;
      }
      throw error;
    }
    this.outOfOrder = null;
    this.state = response.state;
    if (response.alert !== undefined) {
      this.alert = response.alert;
    }
    if (response.assessment !== undefined) {
      this.assessment = response.assessment;
    }
    return response;
  }

  private requireKnownAlternative(alternativeId: string): void {
    if (
      this.problem !== null &&
      !this.problem.alternatives.some((alternative) => alternative.id === alternativeId)
    ) {
      throw new FormValidationError([
        {
          code: "SchemaError",
          path: "$.alternative_id",
          message: `unknown alternative '${alternativeId}'`,
        },
      ]);
    }
  }

  private validateRatings(ratings: Record<string, number>): void {
    const issues: ValidationIssue[] = [];
    if (this.problem !== null) {
      const expected = this.problem.alternatives.map((alternative) => alternative.id);
      const given = Object.keys(ratings);
      if (
        expected.length !== given.length ||
        !expected.every((id) => given.includes(id))
      ) {
        issues.push({
          code: "SchemaError",
          path: "$.ratings",
          message: `ratings must cover exactly the alternatives ${JSON.stringify([...expected].sort())}`,
        });
      }
    }
    for (const [id, value] of Object.entries(ratings)) {
      if (!Number.isInteger(value) || value < 0 || value > 10) {
        issues.push({
          code: "RangeError",
          path: `$.ratings.${id}`,
          message: `rating for '${id}' must be an integer in [0, 10]`,
        });
      }
    }
    if (issues.length > 0) {
      throw new FormValidationError(issues);
    }
  }
}
