/**
 * Browser bootstrap: wires the session machine and the renderers to the
 * document.  Behavior lives in machine.ts and render.ts; this file only
 * reads inputs, dispatches actions, shows errors, and re-renders.
 */

import { ApiClient, ApiError } from "./api.js";
import { FormValidationError, SessionMachine, UiFlowError } from "./machine.js";
import { EntryContext, renderScreen } from "./render.js";
import { emptyDraft } from "./validation.js";

const root = document.querySelector<HTMLElement>("#app");
const status = document.querySelector<HTMLElement>("#status");
if (root === null || status === null) {
  throw new Error("expected #app and #status containers in the host page");
}

const machine = new SessionMachine(new ApiClient(""));
const entry: EntryContext = { draft: emptyDraft(), issues: [] };

function rerender(): void {
  root!.innerHTML = renderScreen(machine, entry);
  if (machine.sessionId !== null) {
    window.location.hash = `session=${encodeURIComponent(machine.sessionId)}`;
  }
}

function showError(error: unknown): void {
  if (error instanceof FormValidationError && machine.screen === "entry") {
    entry.issues = error.issues;
    rerender();
    return;
  }
  if (error instanceof FormValidationError || error instanceof UiFlowError) {
    status!.textContent = error.message;
    return;
  }
  if (error instanceof ApiError) {
    status!.textContent = `${error.code}: ${error.message}`;
    return;
  }
  status!.textContent = String(error);
}

function run(action: () => Promise<void>): void {
  status!.textContent = "";
  action()
    .then(rerender)
    .catch(showError);
}

function field(form: HTMLFormElement, name: string): string {
  const value = new FormData(form).get(name);
  return typeof value === "string" ? value.trim() : "";
}

/** Pull the entry form's current values back into the draft buffer. */
function syncDraft(form: HTMLFormElement): void {
  entry.draft.id = field(form, "problem-id");
  entry.draft.statement = field(form, "statement");
  entry.draft.currency = field(form, "currency");
  entry.draft.alternatives.forEach((alternative, i) => {
    alternative.id = field(form, `alt${i}-id`);
    alternative.label = field(form, `alt${i}-label`);
    alternative.outcomes.forEach((outcome, j) => {
      outcome.amountMinor = field(form, `alt${i}-outcome${j}-amount`);
      outcome.probabilityPct = field(form, `alt${i}-outcome${j}-probability`);
    });
  });
}

function problemForm(): HTMLFormElement | null {
  return root!.querySelector<HTMLFormElement>("#problem-form");
}

root.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  event.preventDefault();
  if (form.id === "problem-form") {
    syncDraft(form);
    const agentId = field(form, "agent-id");
    entry.issues = [];
    run(async () => {
      if (agentId === "") {
        throw new FormValidationError([
          { code: "SchemaError", path: "$.agent_id", message: "agent id is required" },
        ]);
      }
      const problemId = await machine.createProblem(entry.draft);
      await machine.startSession(agentId, problemId);
    });
  } else if (form.id === "existing-problem-form") {
    const problemId = field(form, "existing-problem-id");
    const agentId = field(form, "existing-agent-id");
    run(() => machine.startSession(agentId, problemId));
  } else if (form.id === "ratings-form") {
    const ratings: Record<string, number> = {};
    for (const alternative of machine.problem?.alternatives ?? []) {
      ratings[alternative.id] = Number(field(form, `rating-${alternative.id}`));
    }
    run(() => machine.rate(ratings));
  } else if (form.id === "agreement-form") {
    run(() => machine.agree(Number(field(form, "q1")), Number(field(form, "q2"))));
  }
});

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (target === null || target instanceof HTMLButtonElement === false) {
    return;
  }
  const action = target.dataset.action;
  if (action === "toggle-outcome") {
    const form = problemForm();
    if (form !== null) {
      syncDraft(form);
    }
    const index = Number(target.dataset.alternativeForm);
    const outcomes = entry.draft.alternatives[index]?.outcomes;
    if (outcomes !== undefined) {
      if (outcomes.length === 1) {
        outcomes.push({ amountMinor: "", probabilityPct: "" });
      } else {
        outcomes.pop();
      }
    }
    rerender();
  } else if (action === "choose" || action === "revise-switch") {
    const alternativeId = target.dataset.alternative ?? "";
    run(() =>
      action === "choose"
        ? machine.choose(alternativeId)
        : machine.revise({ alternativeId }),
    );
  } else if (action === "acknowledge") {
    run(() => machine.acknowledge());
  } else if (action === "revise-confirm") {
    run(() => machine.revise({ confirm: true }));
  } else if (action === "resync") {
    run(() => machine.resync());
  } else if (action === "dismiss-banner") {
    machine.dismissOutOfOrder();
    rerender();
  }
});

const sessionFromHash = new URLSearchParams(window.location.hash.slice(1)).get("session");
if (sessionFromHash !== null && sessionFromHash !== "") {
  run(() => machine.resync(sessionFromHash));
} else {
  rerender();
}
