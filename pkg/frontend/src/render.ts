/**
 * Pure HTML renderers, one per screen.
 *
 * Every function maps view-model data to a markup string; no DOM
 * access, so the whole view layer is testable in plain Node.  All
 * decision content on display — restatements, tags, explanation
 * sentences, the decision-weight rows, expected values if any — is
 * server text interpolated verbatim (escaped).  The client adds only
 * neutral chrome: headings, labels, buttons.
 */

import type { Screen, SessionMachine } from "./machine.js";
import type {
  AlertPayload,
  AlternativeDto,
  ProblemDto,
  ValidationIssue,
} from "./types.js";
import type { ProblemDraft } from "./validation.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/**
 * Display form of a minor-unit amount.  Presentation only — the number
 * is shown, never computed with.  Falls back to a plain rendering when
 * the currency code is unknown to Intl.
 */
export function formatMoney(amountMinor: number, currency: string): string {
  try {
    return new Intl.NumberFormat("en", { style: "currency", currency }).format(
      amountMinor / 100,
    );
  } catch {
    return `${currency} ${(amountMinor / 100).toFixed(2)}`;
  }
}

function outcomeLine(amountMinor: number, probabilityPct: string, currency: string): string {
  return `${escapeHtml(probabilityPct)}% chance of ${escapeHtml(
    formatMoney(amountMinor, currency),
  )}`;
}

function alternativeCard(alternative: AlternativeDto, currency: string, body: string): string {
  const label = alternative.label ? ` — ${escapeHtml(alternative.label)}` : "";
  const outcomes = alternative.outcomes
    .map((outcome) => `<li>${outcomeLine(outcome.amount_minor, outcome.probability_pct, currency)}</li>`)
    .join("");
  return `
    <section class="card" data-alternative-card="${escapeHtml(alternative.id)}">
      <h3>${escapeHtml(alternative.id)}${label}</h3>
      <ul>${outcomes}</ul>
      ${body}
    </section>`;
}

export function renderIssues(issues: ValidationIssue[]): string {
  if (issues.length === 0) {
    return "";
  }
  const items = issues
    .map(
      (i) =>
        `<li data-issue-path="${escapeHtml(i.path)}"><code>${escapeHtml(i.path)}</code> ${escapeHtml(i.message)}</li>`,
    )
    .join("");
  return `<ul class="issues" role="alert">${items}</ul>`;
}

// -- screens --------------------------------------------------------------

export function renderEntry(draft: ProblemDraft, issues: ValidationIssue[] = []): string {
  const alternatives = draft.alternatives
    .map((alternative, i) => {
      const outcomes = alternative.outcomes
        .map(
          (outcome, j) => `
          <div class="outcome-row">
            <label>Amount (minor units)
              <input name="alt${i}-outcome${j}-amount" value="${escapeHtml(outcome.amountMinor)}">
            </label>
            <label>Probability %
              <input name="alt${i}-outcome${j}-probability" value="${escapeHtml(outcome.probabilityPct)}">
            </label>
          </div>`,
        )
        .join("");
      return `
        <fieldset data-alternative-form="${i}">
          <legend>Alternative ${i + 1}</legend>
          <label>Identifier <input name="alt${i}-id" value="${escapeHtml(alternative.id)}"></label>
          <label>Label <input name="alt${i}-label" value="${escapeHtml(alternative.label)}"></label>
          ${outcomes}
          <button type="button" data-action="toggle-outcome" data-alternative-form="${i}">
            ${alternative.outcomes.length === 1 ? "Add second outcome" : "Remove second outcome"}
          </button>
        </fieldset>`;
    })
    .join("");
  return `
    <section data-screen="entry">
      <h2>Set up a decision problem</h2>
      ${renderIssues(issues)}
      <form id="problem-form">
        <label>Problem id <input name="problem-id" value="${escapeHtml(draft.id)}"></label>
        <label>Statement <textarea name="statement">${escapeHtml(draft.statement)}</textarea></label>
        <label>Currency <input name="currency" value="${escapeHtml(draft.currency)}" placeholder="BRL"></label>
        ${alternatives}
        <label>Your agent id <input name="agent-id"></label>
        <button type="submit" data-action="create_problem">Create problem and start session</button>
      </form>
      <form id="existing-problem-form">
        <h3>…or join an existing problem</h3>
        <label>Problem id <input name="existing-problem-id"></label>
        <label>Your agent id <input name="existing-agent-id"></label>
        <button type="submit" data-action="start_session">Start session</button>
      </form>
    </section>`;
}

export function renderChoice(problem: ProblemDto): string {
  const cards = problem.alternatives
    .map((alternative) =>
      alternativeCard(
        alternative,
        problem.currency,
        `<button data-action="choose" data-alternative="${escapeHtml(alternative.id)}">
           Choose ${escapeHtml(alternative.id)}
         </button>`,
      ),
    )
    .join("");
  return `
    <section data-screen="choice">
      <h2>Make your decision</h2>
      <p class="statement">${escapeHtml(problem.statement)}</p>
      ${cards}
    </section>`;
}

export function renderRatings(problem: ProblemDto, phase: "pre_ratings" | "post_ratings"): string {
  const heading =
    phase === "pre_ratings"
      ? "Rate the alternatives"
      : "Rate the alternatives once more";
  const rows = problem.alternatives
    .map(
      (alternative) => `
      <label>${escapeHtml(alternative.id)} — preference from 0 (none) to 10 (strongest)
        <input type="number" min="0" max="10" step="1" name="rating-${escapeHtml(alternative.id)}" value="5">
      </label>`,
    )
    .join("");
  return `
    <section data-screen="${phase}">
      <h2>${heading}</h2>
      <p>How strongly do you prefer each alternative right now?</p>
      <form id="ratings-form">
        ${rows}
        <button type="submit" data-action="rate">Submit ratings</button>
      </form>
    </section>`;
}

export function renderAlert(alert: AlertPayload | null): string {
  if (alert === null) {
    // The server says an alert is pending but its content did not reach
    // us; offer a re-sync rather than inventing anything.
    return `
      <section data-screen="alert">
        <p>The alert content could not be loaded.</p>
        <button data-action="resync">Reload from server</button>
      </section>`;
  }
  const { part1, part2 } = alert;
  const recaps = part1.alternatives
    .map((recap) => {
      const chosen = recap.alternative_id === part1.chosen_alternative_id;
      return `
      <li data-chosen="${chosen}">
        <strong>${escapeHtml(recap.alternative_id)}</strong>${chosen ? " (your selection)" : ""}:
        ${escapeHtml(recap.restatement)}
      </li>`;
    })
    .join("");
  const weightRows = part2.decision_weight_table
    .map(([probability, weight]) => {
      const highlighted = probability === part2.highlighted_probability;
      return `
      <tr${highlighted ? ' class="highlight" data-highlighted="true"' : ""}>
        <td>${escapeHtml(probability)}%</td>
        <td>${escapeHtml(weight)}</td>
      </tr>`;
    })
    .join("");
  return `
    <section data-screen="alert">
      <h2>This alert needs your attention before the session continues</h2>
      <article class="alert-part" data-alert-part="1">
        <p>${escapeHtml(part1.purpose)}</p>
        <p class="statement">${escapeHtml(part1.problem_statement)}</p>
        <ul>${recaps}</ul>
      </article>
      <article class="alert-part" data-alert-part="2">
        <section class="card">
          <h3>${escapeHtml(part2.sure_summary.tag)}</h3>
          <p>${escapeHtml(part2.sure_summary.text)}</p>
        </section>
        <section class="card">
          <h3>${escapeHtml(part2.gamble_summary.tag)}</h3>
          <p>${escapeHtml(part2.gamble_summary.text)}</p>
        </section>
        <p>${escapeHtml(part2.loss_aversion_statement)}</p>
        <p class="reference-point">${escapeHtml(part2.reference_point_statement)}</p>
        <table class="weights">
          <caption>How probabilities of losses are weighted</caption>
          <thead><tr><th>Probability</th><th>Decision weight</th></tr></thead>
          <tbody>${weightRows}</tbody>
        </table>
        <p>
          Your gamble's ${escapeHtml(part2.highlighted_probability)}% is weighted as
          ${escapeHtml(part2.highlighted_weight)}.
        </p>
      </article>
      <button data-action="acknowledge">I have read this alert</button>
    </section>`;
}

export function renderAgreement(): string {
  const scale = (name: string) =>
    [1, 2, 3, 4, 5]
      .map(
        (value) => `
        <label class="likert">
          <input type="radio" name="${name}" value="${value}" ${value === 3 ? "checked" : ""}>
          ${value}
        </label>`,
      )
      .join("");
  return `
    <section data-screen="agreement">
      <h2>Two quick questions about the alert</h2>
      <form id="agreement-form">
        <fieldset>
          <legend>How much do you agree that the pattern described applies to your selection?
            (1 = not at all, 5 = fully)</legend>
          ${scale("q1")}
        </fieldset>
        <fieldset>
          <legend>How much did the explanation tell you something you had not considered?
            (1 = nothing, 5 = a lot)</legend>
          ${scale("q2")}
        </fieldset>
        <button type="submit" data-action="agree">Submit answers</button>
      </form>
    </section>`;
}

export function renderRevision(problem: ProblemDto, chosenAlternativeId: string | null): string {
  const switches = problem.alternatives
    .filter((alternative) => alternative.id !== chosenAlternativeId)
    .map(
      (alternative) =>
        `<button data-action="revise-switch" data-alternative="${escapeHtml(alternative.id)}">
           Switch to ${escapeHtml(alternative.id)}
         </button>`,
    )
    .join("");
  return `
    <section data-screen="revision">
      <h2>Confirm or change your decision</h2>
      <p>Your selection so far: <strong>${escapeHtml(chosenAlternativeId ?? "?")}</strong>.</p>
      <button data-action="revise-confirm">Keep ${escapeHtml(chosenAlternativeId ?? "my choice")}</button>
      ${switches}
    </section>`;
}

export function renderDone(machine: SessionMachine): string {
  const final = machine.finalAlternativeId;
  const changed =
    machine.confirmed === null
      ? ""
      : machine.confirmed
        ? "<p>You kept your original selection.</p>"
        : "<p>You changed your selection.</p>";
  return `
    <section data-screen="done">
      <h2>Session complete</h2>
      ${final === null ? "" : `<p>Recorded decision: <strong>${escapeHtml(final)}</strong>.</p>`}
      ${changed}
      <p>Thank you — your session has been recorded.</p>
    </section>`;
}

// -- top level --------------------------------------------------------------

export function renderBanner(machine: SessionMachine): string {
  if (machine.outOfOrder === null) {
    return "";
  }
  return `
    <aside class="banner" role="alert" data-banner="out-of-order">
      <p>This session moved ahead somewhere else; the screen below has been
         refreshed from the server.</p>
      <p><small>${escapeHtml(machine.outOfOrder.message)}</small></p>
      <button data-action="dismiss-banner">OK</button>
    </aside>`;
}

export interface EntryContext {
  draft: ProblemDraft;
  issues: ValidationIssue[];
}

/** Render the screen the machine is on.  Never invents missing data. */
export function renderScreen(machine: SessionMachine, entry: EntryContext): string {
  const screen: Screen = machine.screen;
  const problem = machine.problem;
  let body: string;
  switch (screen) {
    case "entry":
      body = renderEntry(entry.draft, entry.issues);
      break;
    case "choice":
      body = problem === null ? missingProblem() : renderChoice(problem);
      break;
    case "pre_ratings":
    case "post_ratings":
      body = problem === null ? missingProblem() : renderRatings(problem, screen);
      break;
    case "alert":
      body = renderAlert(machine.alert);
      break;
    case "agreement":
      body = renderAgreement();
      break;
    case "revision":
      body =
        problem === null
          ? missingProblem()
          : renderRevision(problem, machine.chosenAlternativeId);
      break;
    case "done":
      body = renderDone(machine);
      break;
  }
  return renderBanner(machine) + body;
}

function missingProblem(): string {
  return `
    <section>
      <p>The decision problem could not be loaded.</p>
      <button data-action="resync">Reload from server</button>
    </section>`;
}
