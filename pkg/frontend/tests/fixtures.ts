/**
 * Server-shaped fixtures for the test fake, copied from real service
 * responses so the shapes (and the sentinel strings the tests grep
 * for) are the genuine article.
 */

import type { AlertPayload, AssessmentPayload, ProblemDto } from "../src/types.js";

export function restructureProblem(): ProblemDto {
  return structuredClone({
    id: "restructure",
    statement: "Pick exactly one.",
    currency: "BRL",
    alternatives: [
      {
        id: "alt1",
        label: "sure restructuring",
        outcomes: [{ amount_minor: -20_000_000, probability_pct: "100" }],
      },
      {
        id: "alt2",
        label: "risky restructuring",
        outcomes: [
          { amount_minor: -25_000_000, probability_pct: "90" },
          { amount_minor: 0, probability_pct: "10" },
        ],
      },
    ],
  });
}

export function restructureAlert(): AlertPayload {
  return structuredClone({
    part1: {
      purpose:
        "Before your choice is final, this alert walks through why choosing a " +
        "gamble over a sure alternative, when both mean losing, tends to follow " +
        "a risk-seeking pattern rather than a money calculation. You remain free " +
        "to keep your selection.",
      problem_statement: "Pick exactly one.",
      chosen_alternative_id: "alt2",
      alternatives: [
        {
          alternative_id: "alt1",
          label: "sure restructuring",
          restatement: "a 100% chance of losing R$ 200,000.00",
          outcomes: [{ amount_minor: -20_000_000, probability_pct: "100" }],
        },
        {
          alternative_id: "alt2",
          label: "risky restructuring",
          restatement:
            "a 90% chance of losing R$ 250,000.00 AND a 10% chance of losing nothing",
          outcomes: [
            { amount_minor: -25_000_000, probability_pct: "90" },
            { amount_minor: 0, probability_pct: "10" },
          ],
        },
      ],
    },
    part2: {
      currency: "BRL",
      sure_summary: {
        alternative_id: "alt1",
        amount_minor: -20_000_000,
        probability_pct: "100",
        tag: "High loss for sure",
        text: "a 100% chance of losing R$ 200,000.00",
      },
      gamble_summary: {
        alternative_id: "alt2",
        principal_amount_minor: -25_000_000,
        principal_probability_pct: "90",
        secondary_amount_minor: 0,
        secondary_probability_pct: "10",
        tag: "High probability of higher loss",
        text: "a 90% chance of losing R$ 250,000.00 AND a 10% chance of losing nothing",
      },
      loss_aversion_statement:
        "Losses weigh more than gains of the same size. That extra weight can " +
        "make a sure loss feel worse than a gamble for an even larger loss, " +
        "pulling the selection away from the amounts themselves.",
      reference_point_statement:
        "The gamble keeps open the hope of LOSING NOTHING, and that hope becomes " +
        "the reference point. Judged from there, the sure alternative reads as a " +
        "guaranteed loss, which makes the gamble look better than its own numbers.",
      reference_point_amount_minor: 0,
      decision_weight_table: [
        ["50", "45"],
        ["60", "52"],
        ["75", "63"],
        ["80", "67"],
        ["90", "77.5"],
        ["95", "85"],
        ["98", "91.5"],
        ["99", "94.5"],
        ["100", "100"],
      ] as [string, string][],
      highlighted_probability: "90",
      highlighted_weight: "77.5",
    },
    text: "RISK ALERT: your selection matches a known bias pattern (plain-text rendering)",
  });
}

export function restructureAssessment(): AssessmentPayload {
  return structuredClone({
    problem_id: "restructure",
    choice_id: "choice-1",
    ev_per_alternative: {
      alt1: { amount_minor: "-20000000", currency: "BRL" },
      alt2: { amount_minor: "-22500000", currency: "BRL" },
    },
    fourfold_cell: {
      domain: "losses",
      probability_band: "high",
      predicted_preference: "risk_seeking",
      effect: "certainty",
    },
    risk_seeking_for_losses: true,
    trace: [
      {
        name: "isEV1GreaterEqualsEV2",
        operands: [
          ["ev1_minor", "-20000000"],
          ["ev2_minor", "-22500000"],
        ] as [string, string][],
        result: true,
      },
    ],
    mode: "canonical",
    unbiased_best_alternative_id: "alt1",
  });
}

/**
 * Strings that only ever exist inside alert/assessment payloads.  A
 * screen that never received those payloads must not contain any of
 * them.
 */
export function verdictSentinels(): string[] {
  const alert = restructureAlert();
  return [
    alert.part1.purpose,
    alert.part2.sure_summary.tag,
    alert.part2.gamble_summary.tag,
    alert.part2.reference_point_statement,
    alert.part2.highlighted_weight,
    alert.text,
    "-22500000",
    "risk_seeking",
  ];
}
