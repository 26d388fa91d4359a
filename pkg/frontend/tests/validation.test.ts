/**
 * The client-side pre-validation mirrors the server's rules and issue
 * shape; these tests pin the mirrored rules, including the examples
 * the form must catch before a request is made.
 */

import { describe, expect, it } from "vitest";

import {
  emptyDraft,
  probabilityHundredths,
  toWireProblem,
  validateDraft,
  type ProblemDraft,
} from "../src/validation.js";

function goodDraft(): ProblemDraft {
  return {
    id: "restructure",
    statement: "Pick exactly one.",
    currency: "BRL",
    alternatives: [
      {
        id: "alt1",
        label: "sure",
        outcomes: [{ amountMinor: "-20000000", probabilityPct: "100" }],
      },
      {
        id: "alt2",
        label: "risky",
        outcomes: [
          { amountMinor: "-25000000", probabilityPct: "90" },
          { amountMinor: "0", probabilityPct: "10" },
        ],
      },
    ],
  };
}

function codesAt(draft: ProblemDraft): [string, string][] {
  return validateDraft(draft).map((issue) => [issue.code, issue.path]);
}

describe("probability parsing", () => {
  it("parses exact decimal percents into hundredths", () => {
    expect(probabilityHundredths("100")).toBe(10_000);
    expect(probabilityHundredths("77.5")).toBe(7_750);
    expect(probabilityHundredths("0")).toBe(0);
    expect(probabilityHundredths("0.01")).toBe(1);
  });

  it("rejects precision, range and format violations", () => {
    expect(probabilityHundredths("77.555")).toBeNull();
    expect(probabilityHundredths("100.01")).toBeNull();
    expect(probabilityHundredths("101")).toBeNull();
    expect(probabilityHundredths("-5")).toBeNull();
    expect(probabilityHundredths(".5")).toBeNull();
    expect(probabilityHundredths("1e2")).toBeNull();
    expect(probabilityHundredths("")).toBeNull();
  });
});

describe("draft validation", () => {
  it("accepts a complete two-alternative draft", () => {
    expect(validateDraft(goodDraft())).toEqual([]);
  });

  it("flags probabilities that do not sum to 100 before submission", () => {
    const draft = goodDraft();
    draft.alternatives[1]!.outcomes[1]!.probabilityPct = "20"; // 90 + 20
    const issues = validateDraft(draft);
    expect(issues).toHaveLength(1);
    expect(issues[0]).toMatchObject({
      code: "ProbabilitySumError",
      path: "$.alternatives[1].outcomes",
    });
    expect(issues[0]!.message).toContain("110");
  });

  it("reports fractional sums exactly", () => {
    const draft = goodDraft();
    draft.alternatives[1]!.outcomes[0]!.probabilityPct = "89.99";
    const issues = validateDraft(draft);
    expect(issues[0]!.message).toContain("99.99");
  });

  it("requires statement, id and currency", () => {
    const draft = goodDraft();
    draft.statement = "  ";
    draft.id = "";
    draft.currency = "";
    const codes = codesAt(draft);
    expect(codes).toContainEqual(["SchemaError", "$.statement"]);
    expect(codes).toContainEqual(["SchemaError", "$.id"]);
    expect(codes).toContainEqual(["SchemaError", "$.currency"]);
  });

  it("requires a 3-letter currency code", () => {
    const draft = goodDraft();
    draft.currency = "real";
    expect(codesAt(draft)).toContainEqual(["SchemaError", "$.currency"]);
  });

  it("requires exactly two alternatives with distinct ids", () => {
    const one = goodDraft();
    one.alternatives = [one.alternatives[0]!];
    expect(codesAt(one)).toContainEqual(["ArityError", "$.alternatives"]);

    const dup = goodDraft();
    dup.alternatives[1]!.id = "alt1";
    expect(codesAt(dup)).toContainEqual(["DuplicateId", "$.alternatives"]);
  });

  it("requires one or two outcomes per alternative", () => {
    const draft = goodDraft();
    draft.alternatives[0]!.outcomes = [];
    expect(codesAt(draft)).toContainEqual(["ArityError", "$.alternatives[0].outcomes"]);
  });

  it("requires integer amounts within the form's safe range", () => {
    const fractional = goodDraft();
    fractional.alternatives[0]!.outcomes[0]!.amountMinor = "12.5";
    expect(codesAt(fractional)).toContainEqual([
      "SchemaError",
      "$.alternatives[0].outcomes[0].amount_minor",
    ]);

    const huge = goodDraft();
    huge.alternatives[0]!.outcomes[0]!.amountMinor = "9007199254740993"; // 2^53 + 1
    expect(codesAt(huge)).toContainEqual([
      "RangeError",
      "$.alternatives[0].outcomes[0].amount_minor",
    ]);
  });

  it("flags malformed probabilities per outcome without a bogus sum error", () => {
    const draft = goodDraft();
    draft.alternatives[1]!.outcomes[0]!.probabilityPct = "ninety";
    const issues = validateDraft(draft);
    expect(issues).toHaveLength(1);
    expect(issues[0]).toMatchObject({
      code: "RangeError",
      path: "$.alternatives[1].outcomes[0].probability_pct",
    });
  });

  it("starts from an empty two-alternative scaffold", () => {
    const draft = emptyDraft();
    expect(draft.alternatives).toHaveLength(2);
    expect(draft.alternatives[0]!.outcomes).toHaveLength(1);
  });
});

describe("wire conversion", () => {
  it("produces the server's problem shape with trimmed fields", () => {
    const draft = goodDraft();
    draft.id = " restructure ";
    draft.alternatives[0]!.outcomes[0]!.amountMinor = " -20000000 ";
    const wire = toWireProblem(draft);
    expect(wire.id).toBe("restructure");
    expect(wire.alternatives[0]!.outcomes[0]).toEqual({
      amount_minor: -20_000_000,
      probability_pct: "100",
    });
    expect(typeof wire.alternatives[0]!.outcomes[0]!.amount_minor).toBe("number");
    expect(typeof wire.alternatives[0]!.outcomes[0]!.probability_pct).toBe("string");
  });
});
