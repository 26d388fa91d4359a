/**
 * Wire types for the decision-bias service HTTP API.
 *
 * Everything here mirrors JSON payloads produced (or accepted) by the
 * service.  Amounts travel as integers in minor currency units and
 * probabilities and decision weights as exact decimal strings; the
 * client displays them but never derives expected values, weights, or
 * verdicts from them.
 */

export type FlowMode = "experiment" | "production";

export type SessionState =
  | "awaiting_choice"
  | "awaiting_pre_ratings"
  | "alerted"
  | "awaiting_agreement"
  | "awaiting_post_ratings"
  | "awaiting_revision"
  | "completed";

export interface OutcomeDto {
  amount_minor: number;
  probability_pct: string;
}

export interface AlternativeDto {
  id: string;
  label: string;
  outcomes: OutcomeDto[];
}

export interface ProblemDto {
  id: string;
  statement: string;
  currency: string;
  alternatives: AlternativeDto[];
}

/** One field-level violation, as reported by the server's validator. */
export interface ValidationIssue {
  code: string;
  path: string;
  message: string;
}

export interface ErrorEnvelope {
  error: {
    code: string;
    message: string;
    details?: { issues?: ValidationIssue[] } & Record<string, unknown>;
  };
}

// -- alert payload -----------------------------------------------------
// The alert arrives fully rendered: every sentence, restatement, tag,
// and table row below is server text.  The client's only job is layout.

export interface AlertAlternativeRecap {
  alternative_id: string;
  label: string;
  restatement: string;
  outcomes: OutcomeDto[];
}

export interface AlertPart1 {
  purpose: string;
  problem_statement: string;
  chosen_alternative_id: string;
  alternatives: AlertAlternativeRecap[];
}

export interface AlertSureSummary {
  alternative_id: string;
  amount_minor: number;
  probability_pct: string;
  tag: string;
  text: string;
}

export interface AlertGambleSummary {
  alternative_id: string;
  principal_amount_minor: number;
  principal_probability_pct: string;
  secondary_amount_minor: number;
  secondary_probability_pct: string;
  tag: string;
  text: string;
}

export interface AlertPart2 {
  currency: string;
  sure_summary: AlertSureSummary;
  gamble_summary: AlertGambleSummary;
  loss_aversion_statement: string;
  reference_point_statement: string;
  reference_point_amount_minor: number;
  /** All nine (probability, weight) rows, as decimal strings. */
  decision_weight_table: [string, string][];
  highlighted_probability: string;
  highlighted_weight: string;
}

export interface AlertPayload {
  part1: AlertPart1;
  part2: AlertPart2;
  /** Plain-text rendering of the whole alert, for copy/paste. */
  text: string;
}

// -- assessment payload -------------------------------------------------

export interface TraceEntry {
  name: string;
  operands: [string, string][];
  result: boolean;
}

export interface FourfoldCell {
  domain: string;
  probability_band: string;
  predicted_preference: string;
  effect: string;
}

export interface AssessmentPayload {
  problem_id: string;
  choice_id: string;
  ev_per_alternative: Record<string, { amount_minor: string; currency: string }>;
  fourfold_cell: FourfoldCell;
  risk_seeking_for_losses: boolean;
  trace: TraceEntry[];
  mode: string;
  unbiased_best_alternative_id: string;
}

// -- endpoint responses --------------------------------------------------

export interface ProblemCreated {
  problem_id: string;
}

export interface SessionCreated {
  session_id: string;
  state: SessionState;
  flow: FlowMode;
}

export interface ChoiceResponse {
  choice_id: string;
  session_id: string;
  state: SessionState;
  /** Present in the production flow only (alerted or completed). */
  assessment?: AssessmentPayload;
  /** Present when the choice was flagged in the production flow. */
  alert?: AlertPayload;
}

export interface RatingsResponse {
  awareness_level: 0 | 1;
  session_id: string;
  state: SessionState;
  /** Present when the first rating round reveals a flagged choice. */
  alert?: AlertPayload;
}

export interface StepResponse {
  session_id: string;
  state: SessionState;
}

export interface RevisionResponse extends StepResponse {
  final_alternative_id: string;
  confirmed: boolean;
}

export interface SessionView {
  session_id: string;
  agent_id: string;
  problem_id: string;
  flow: FlowMode;
  state: SessionState;
  choice_id: string | null;
  chosen_alternative_id: string | null;
  final_alternative_id: string | null;
  acknowledged: boolean;
  alert: AlertPayload | null;
}
