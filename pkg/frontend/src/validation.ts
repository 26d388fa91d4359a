/**
 * Client-side pre-validation for the problem entry form.
 *
 * Mirrors the server rules that matter for instant feedback: exactly
 * two alternatives, one or two outcomes each, integer amounts in minor
 * units, probabilities with at most two decimal places that sum to
 * exactly 100 per alternative.  Issues use the same {code, path,
 * message} shape and codes the server reports, so the form renders
 * local and server findings identically.  The server stays
 * authoritative; this module only saves a round trip.
 */

import type { ProblemDto, ValidationIssue } from "./types.js";

/** Form buffer: everything still a string, exactly as typed. */
export interface DraftOutcome {
  amountMinor: string;
  probabilityPct: string;
}

export interface DraftAlternative {
  id: string;
  label: string;
  outcomes: DraftOutcome[];
}

export interface ProblemDraft {
  id: string;
  statement: string;
  currency: string;
  alternatives: DraftAlternative[];
}

export function emptyDraft(): ProblemDraft {
  return {
    id: "",
    statement: "",
    currency: "",
    alternatives: [
      { id: "", label: "", outcomes: [{ amountMinor: "", probabilityPct: "" }] },
      { id: "", label: "", outcomes: [{ amountMinor: "", probabilityPct: "" }] },
    ],
  };
}

const INTEGER = /^-?\d+$/;
const PROBABILITY = /^\d{1,3}(\.\d{1,2})?$/;

/**
 * Parse a probability percentage into hundredths of a percent, or null
 * if malformed.  Integer arithmetic end to end: "77.5" -> 7750.
 */
export function probabilityHundredths(text: string): number | null {
  if (!PROBABILITY.test(text)) {
    return null;
  }
  const [whole, fraction = ""] = text.split(".");
  const scaled = Number(whole) * 100 + Number(fraction.padEnd(2, "0"));
  return scaled <= 10_000 ? scaled : null;
}

function issue(code: string, path: string, message: string): ValidationIssue {
  return { code, path, message };
}

export function validateDraft(draft: ProblemDraft): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  for (const key of ["id", "statement", "currency"] as const) {
    if (draft[key].trim() === "") {
      issues.push(issue("SchemaError", `$.${key}`, `${key} must be a non-empty string`));
    }
  }
  if (draft.currency !== "" && !/^[A-Z]{3}$/.test(draft.currency)) {
    issues.push(issue("SchemaError", "$.currency", "currency must be a 3-letter code"));
  }
  if (draft.alternatives.length !== 2) {
    issues.push(
      issue(
        "ArityError",
        "$.alternatives",
        `expected exactly 2 alternatives, got ${draft.alternatives.length}`,
      ),
    );
  }
  const seen = new Set<string>();
  draft.alternatives.forEach((alternative, i) => {
    const path = `$.alternatives[${i}]`;
    if (alternative.id.trim() === "") {
      issues.push(issue("SchemaError", `${path}.id`, "id must be a non-empty string"));
    } else if (seen.has(alternative.id)) {
      issues.push(
        issue("DuplicateId", "$.alternatives", `alternative id '${alternative.id}' appears twice`),
      );
    } else {
      seen.add(alternative.id);
    }
    if (alternative.outcomes.length < 1 || alternative.outcomes.length > 2) {
      issues.push(
        issue(
          "ArityError",
          `${path}.outcomes`,
          `expected 1 or 2 outcomes, got ${alternative.outcomes.length}`,
        ),
      );
    }
    let sum = 0;
    let sumKnown = true;
    alternative.outcomes.forEach((outcome, j) => {
      const outcomePath = `${path}.outcomes[${j}]`;
      if (!INTEGER.test(outcome.amountMinor.trim())) {
        issues.push(
          issue(
            "SchemaError",
            `${outcomePath}.amount_minor`,
            "amount must be an integer in minor units (e.g. cents)",
          ),
        );
      } else if (!Number.isSafeInteger(Number(outcome.amountMinor.trim()))) {
        // The JSON layer of this form is limited to 2^53-1; the service
        // itself accepts the full 64-bit range.
        issues.push(
          issue(
            "RangeError",
            `${outcomePath}.amount_minor`,
            "amount is too large for this form",
          ),
        );
      }
      const scaled = probabilityHundredths(outcome.probabilityPct.trim());
      if (scaled === null) {
        sumKnown = false;
        issues.push(
          issue(
            "RangeError",
            `${outcomePath}.probability_pct`,
            "probability must be 0..100 with at most 2 decimal places",
          ),
        );
      } else {
        sum += scaled;
      }
    });
    if (sumKnown && alternative.outcomes.length > 0 && sum !== 10_000) {
      issues.push(
        issue(
          "ProbabilitySumError",
          `${path}.outcomes`,
          `probabilities sum to ${formatHundredths(sum)}, expected exactly 100`,
        ),
      );
    }
  });
  return issues;
}

function formatHundredths(scaled: number): string {
  const whole = Math.floor(scaled / 100);
  const fraction = scaled % 100;
  if (fraction === 0) {
    return String(whole);
  }
  return `${whole}.${String(fraction).padStart(2, "0")}`.replace(/0$/, "");
}

/** Convert a draft that passed validation into the wire shape. */
export function toWireProblem(draft: ProblemDraft): ProblemDto {
  return {
    id: draft.id.trim(),
    statement: draft.statement.trim(),
    currency: draft.currency.trim(),
    alternatives: draft.alternatives.map((alternative) => ({
      id: alternative.id.trim(),
      label: alternative.label.trim(),
      outcomes: alternative.outcomes.map((outcome) => ({
        amount_minor: Number(outcome.amountMinor.trim()),
        probability_pct: outcome.probabilityPct.trim(),
      })),
    })),
  };
}
