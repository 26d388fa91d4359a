"""Shared builders and golden fixtures for the test suite."""

from __future__ import annotations

import random
from decimal import Decimal
from fractions import Fraction

from abi.model import Alternative, Choice, ChoicePhase, DecisionProblem, Money, Outcome, Probability

FIXED_TS = "2026-01-01T00:00:00+00:00"


def make_alternative(alt_id, outcomes, currency="USD", label=""):
    return Alternative(
        alt_id,
        label,
        tuple(Outcome(Money(amount, currency), Probability.of(prob)) for amount, prob in outcomes),
    )


def make_problem(problem_id, first, second, currency="USD", statement="Pick exactly one.", ids=("a1", "a2")):
    return DecisionProblem(
        problem_id,
        statement,
        (
            make_alternative(ids[0], first, currency),
            make_alternative(ids[1], second, currency),
        ),
        currency,
    )


def make_choice(problem, alt_id, choice_id="c1", agent_id="agent-1", phase="initial"):
    return Choice(choice_id, problem.id, agent_id, alt_id, ChoicePhase(phase), FIXED_TS)


# A sure penalty against a slightly larger, highly probable one; the
# expected values tie at -950000 minor units.
PENALTY = make_problem("sure-penalty", [(-950_000, 100)], [(-1_000_000, 95), (0, 5)])

# Same shape in the gains domain; choosing the gamble here is not a
# risk-seeking-for-losses choice.
BONUS_MIRROR = make_problem("sure-bonus", [(950_000, 100)], [(1_000_000, 95), (0, 5)])

# Restructuring decision in BRL: close a line and lose R$ 200,000 for
# sure, or keep going with a 90% chance of losing R$ 250,000.
RESTRUCTURE = make_problem(
    "restructure",
    [(-20_000_000, 100)],
    [(-25_000_000, 90), (0, 10)],
    currency="BRL",
    ids=("alt1", "alt2"),
    statement="A demand drop forces one of two restructuring plans.",
)

RESTRUCTURE_RAW = {
    "id": "restructure",
    "statement": "A demand drop forces one of two restructuring plans.",
    "currency": "BRL",
    "alternatives": [
        {
            "id": "alt1",
            "label": "close one line",
            "outcomes": [{"amount_minor": -20_000_000, "probability_pct": "100"}],
        },
        {
            "id": "alt2",
            "label": "keep both lines",
            "outcomes": [
                {"amount_minor": -25_000_000, "probability_pct": "90"},
                {"amount_minor": 0, "probability_pct": "10"},
            ],
        },
    ],
}


def random_amount(rng: random.Random) -> int:
    # zero amounts matter for the secondary-branch predicate, keep them common
    if rng.random() < 0.25:
        return 0
    return rng.randint(-1_000_000, 1_000_000)


def random_outcomes(rng: random.Random) -> list[tuple[int, int]]:
    """One alternative's outcomes; probabilities are multiples of 5."""
    shape = rng.randrange(4)
    if shape == 0:
        return [(random_amount(rng), 100)]
    if shape == 1:
        return [(random_amount(rng), 100), (random_amount(rng), 0)]
    if shape == 2:
        return [(random_amount(rng), 0), (random_amount(rng), 100)]
    p = 5 * rng.randint(1, 19)
    return [(random_amount(rng), p), (random_amount(rng), 100 - p)]


def biased_outcomes_pair(rng: random.Random) -> tuple[list, list]:
    """A sure-loss-versus-loss-gamble pair that often satisfies the rule."""
    sure_loss = rng.randint(1, 500_000)
    gamble_loss = rng.randint(1, 1_000_000)
    p = 5 * rng.randint(10, 19)
    secondary = rng.choice([0, 0, -rng.randint(1, 10_000), rng.randint(1, 10_000)])
    return (
        [(-sure_loss, 100)],
        [(-gamble_loss, p), (secondary, 100 - p)],
    )


def random_problem(rng: random.Random, index: int) -> DecisionProblem:
    if rng.random() < 0.5:
        first, second = biased_outcomes_pair(rng)
        if rng.random() < 0.5:
            first, second = second, first
    else:
        first, second = random_outcomes(rng), random_outcomes(rng)
    return make_problem(f"p{index}", first, second)


def ev_fraction(outcomes) -> Fraction:
    """Independent expected value: exact rational arithmetic."""
    total = Fraction(0)
    for amount, prob in outcomes:
        total += Fraction(amount) * Fraction(Decimal(str(prob))) / 100
    return total


def choice_payload(choice) -> dict:
    return {
        "id": choice.id,
        "problem_id": choice.problem_id,
        "agent_id": choice.agent_id,
        "chosen_alternative_id": choice.chosen_alternative_id,
        "phase": choice.phase.value,
    }


def build_cohort_log(n_flagged=101, n_unflagged=53, n_improved=8, clock=None):
    """In-memory history of one problem and a cohort of single-choice agents.

    Flagged agents choose the gamble, rate both alternatives before and
    after the alert, acknowledge it, and answer the agreement questions;
    the first ``n_improved`` of them move from awareness 0 to 1, the
    rest stay at 0.  Unflagged agents choose the sure loss and stop
    after the assessment.
    """
    from abi.engine import assess
    from abi.history import EventLog

    log = EventLog(clock=clock)
    log.append_event("ProblemCreated", {"problem": RESTRUCTURE_RAW})
    for i in range(n_flagged):
        cid = f"choice-f{i:03d}"
        choice = make_choice(RESTRUCTURE, "alt2", choice_id=cid, agent_id=f"agent-f{i:03d}")
        log.append_event("ChoiceMade", {"choice": choice_payload(choice)})
        log.append_event("AssessmentIssued", {"assessment": assess(RESTRUCTURE, choice).to_json_dict()})
        log.append_event(
            "RatingsRecorded",
            {"rating": {"choice_id": cid, "phase": "before_alert", "ratings": {"alt1": 5, "alt2": 8}}},
        )
        log.append_event("AlertAcknowledged", {"choice_id": cid})
        improved = i < n_improved
        log.append_event(
            "AgreementRecorded",
            {
                "agreement": {
                    "choice_id": cid,
                    "q1_bias_agreement": 5 if improved else 4,
                    "q2_insight_agreement": 5 if improved else 2,
                }
            },
        )
        after = {"alt1": 9, "alt2": 3} if improved else {"alt1": 4, "alt2": 8}
        log.append_event(
            "RatingsRecorded",
            {"rating": {"choice_id": cid, "phase": "after_alert", "ratings": after}},
        )
    for i in range(n_unflagged):
        cid = f"choice-u{i:03d}"
        choice = make_choice(RESTRUCTURE, "alt1", choice_id=cid, agent_id=f"agent-u{i:03d}")
        log.append_event("ChoiceMade", {"choice": choice_payload(choice)})
        log.append_event("AssessmentIssued", {"assessment": assess(RESTRUCTURE, choice).to_json_dict()})
    return log
