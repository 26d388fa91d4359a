"""Detection of risk-seeking choices between a sure loss and a loss gamble.

The rule views each alternative through two slots: a principal
(value, probability) pair and a secondary one, padding single-outcome
alternatives with an impossible zero branch.  Eight predicates over the
two alternatives and the chosen one are always all evaluated (no
short-circuit) so the trace is complete even when the verdict is
already settled, and the verdict is their conjunction:

  1. the chosen alternative is the gamble (second slot position)
  2. the first alternative is sure (principal probability is 100)
  3. its principal value is a loss
  4. the gamble's principal probability is high but short of certain
  5. the gamble's principal value is a loss
  6. the gamble's secondary value is not a gain
  7. the gamble's principal loss exceeds the sure loss in magnitude
  8. the sure alternative's expected value is at least the gamble's

In canonical mode the engine first decomposes the problem into the
sure side and the gamble side regardless of storage order; in strict
mode slots follow stored positions exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Mapping

from .errors import InvalidValue
from .model import Alternative, Choice, DecisionProblem, decimal_str
from .valuation import (
    ExpectedValue,
    FourfoldCell,
    UnsupportedShape,
    classify_risk_context,
    expected_value,
    is_sure,
    principal_outcome_index,
    sure_alternative_index,
)

HUNDRED = Decimal(100)
HIGH_BAND_FLOOR = Decimal(50)

PREDICATE_NAMES = (
    "chosen_is_gamble",
    "isProbability100_a1",
    "isNegativeValue_a1",
    "isProbabilityHighAndLess100_a2",
    "isNegativeValue_a2",
    "isNegativeOrZeroValue_b2",
    "isAbsValuea2GreaterAbsValuea1",
    "isEV1GreaterEqualsEV2",
)


class Mode(str, Enum):
    CANONICAL = "canonical"
    STRICT = "strict"


@dataclass(frozen=True)
class PredicateResult:
    """One evaluated predicate with the operand values it saw."""

    name: str
    operands: tuple[tuple[str, str], ...]
    result: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "operands": [[k, v] for k, v in self.operands],
            "result": self.result,
        }


@dataclass(frozen=True)
class PredicateTrace:
    """All eight predicate evaluations in rule order."""

    entries: tuple[PredicateResult, ...]

    def __post_init__(self) -> None:
        names = tuple(e.name for e in self.entries)
        if names != PREDICATE_NAMES:
            raise InvalidValue(f"trace must hold exactly the eight rule predicates, got {names}")

    @property
    def verdict(self) -> bool:
        return all(e.result for e in self.entries)

    def __getitem__(self, name: str) -> PredicateResult:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_json_dict(self) -> list[dict]:
        return [e.to_json_dict() for e in self.entries]


@dataclass(frozen=True)
class SlotView:
    """An alternative flattened to (a, b) slots of (value, probability)."""

    a_value: int
    a_probability: Decimal
    b_value: int
    b_probability: Decimal


@dataclass(frozen=True)
class CanonicalLayout:
    """Sure-vs-gamble decomposition of a problem, storage order aside."""

    sure: Alternative
    gamble: Alternative
    chosen_is_gamble: bool


def slot_view_stored(alternative: Alternative) -> SlotView:
    """Slots in stored outcome order, padded with an impossible branch."""
    outs = alternative.outcomes
    a = outs[0]
    if len(outs) == 2:
        b = outs[1]
        return SlotView(a.value.amount_minor, a.probability.value, b.value.amount_minor, b.probability.value)
    return SlotView(a.value.amount_minor, a.probability.value, 0, Decimal(0))


def slot_view_canonical(alternative: Alternative) -> SlotView:
    """Slots with the principal outcome first, padded like stored view."""
    outs = alternative.outcomes
    if len(outs) == 1:
        return SlotView(outs[0].value.amount_minor, outs[0].probability.value, 0, Decimal(0))
    ai = principal_outcome_index(alternative)
    a, b = outs[ai], outs[1 - ai]
    return SlotView(a.value.amount_minor, a.probability.value, b.value.amount_minor, b.probability.value)


def canonicalize(problem: DecisionProblem, chosen_alternative_id: str) -> CanonicalLayout | None:
    """Split the problem into its sure and gamble sides, if it has them.

    Returns None when the problem is not one-sure-versus-one-gamble
    (both sure, or neither).
    """
    problem.alternative(chosen_alternative_id)
    sure_index = sure_alternative_index(problem)
    if sure_index is None:
        return None
    sure = problem.alternatives[sure_index]
    gamble = problem.alternatives[1 - sure_index]
    if is_sure(gamble):
        return None
    return CanonicalLayout(sure, gamble, chosen_is_gamble=(chosen_alternative_id == gamble.id))


def _evaluate(
    option1: Alternative,
    option2: Alternative,
    slots1: SlotView,
    slots2: SlotView,
    chosen_alternative_id: str,
) -> PredicateTrace:
    ev1 = expected_value(option1).amount_minor
    ev2 = expected_value(option2).amount_minor
    entries = (
        PredicateResult(
            "chosen_is_gamble",
            (("chosen_alternative_id", chosen_alternative_id), ("option2_id", option2.id)),
            chosen_alternative_id == option2.id,
        ),
        PredicateResult(
            "isProbability100_a1",
            (("probability_a1", decimal_str(slots1.a_probability)),),
            slots1.a_probability == HUNDRED,
        ),
        PredicateResult(
            "isNegativeValue_a1",
            (("financial_value_a1", str(slots1.a_value)),),
            slots1.a_value < 0,
        ),
        PredicateResult(
            "isProbabilityHighAndLess100_a2",
            (("probability_a2", decimal_str(slots2.a_probability)),),
            HIGH_BAND_FLOOR <= slots2.a_probability < HUNDRED,
        ),
        PredicateResult(
            "isNegativeValue_a2",
            (("financial_value_a2", str(slots2.a_value)),),
            slots2.a_value < 0,
        ),
        PredicateResult(
            "isNegativeOrZeroValue_b2",
            (("financial_value_b2", str(slots2.b_value)),),
            slots2.b_value <= 0,
        ),
        PredicateResult(
            "isAbsValuea2GreaterAbsValuea1",
            (
                ("financial_value_a2", str(slots2.a_value)),
                ("financial_value_a1", str(slots1.a_value)),
            ),
            abs(slots2.a_value) > abs(slots1.a_value),
        ),
        PredicateResult(
            "isEV1GreaterEqualsEV2",
            (("ev1_minor", decimal_str(ev1)), ("ev2_minor", decimal_str(ev2))),
            ev1 >= ev2,
        ),
    )
    return PredicateTrace(entries)


def is_risk_seeking_for_losses_choice(
    problem: DecisionProblem,
    chosen_alternative_id: str,
    mode: Mode = Mode.CANONICAL,
) -> tuple[bool, PredicateTrace]:
    """Apply the eight-predicate rule; returns (verdict, full trace).

    Canonical mode aligns option 1 with the sure side and option 2 with
    the gamble, each viewed principal-outcome-first; when the problem
    has no such decomposition the stored layout is used (the sureness
    predicates then fail, so the verdict is necessarily False).  Strict
    mode always follows stored order.
    """
    problem.alternative(chosen_alternative_id)
    mode = Mode(mode)
    if mode is Mode.STRICT:
        option1, option2 = problem.alternatives
        slots1, slots2 = slot_view_stored(option1), slot_view_stored(option2)
    else:
        layout = canonicalize(problem, chosen_alternative_id)
        if layout is None:
            option1, option2 = problem.alternatives
        else:
            option1, option2 = layout.sure, layout.gamble
        slots1, slots2 = slot_view_canonical(option1), slot_view_canonical(option2)
    trace = _evaluate(option1, option2, slots1, slots2, chosen_alternative_id)
    return trace.verdict, trace


@dataclass(frozen=True)
class RiskAssessment:
    """Everything the engine concluded about one recorded choice."""

    problem_id: str
    choice_id: str
    ev_per_alternative: Mapping[str, ExpectedValue]
    fourfold_cell: FourfoldCell | None
    risk_seeking_for_losses: bool
    trace: PredicateTrace
    mode: Mode
    unbiased_best_alternative_id: str

    def to_json_dict(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "choice_id": self.choice_id,
            "ev_per_alternative": {
                alt_id: {"amount_minor": decimal_str(ev.amount_minor), "currency": ev.currency}
                for alt_id, ev in self.ev_per_alternative.items()
            },
            "fourfold_cell": self.fourfold_cell.to_json_dict() if self.fourfold_cell else None,
            "risk_seeking_for_losses": self.risk_seeking_for_losses,
            "trace": self.trace.to_json_dict(),
            "mode": self.mode.value,
            "unbiased_best_alternative_id": self.unbiased_best_alternative_id,
        }


def unbiased_best_alternative_id(problem: DecisionProblem) -> str:
    """Alternative a risk-neutral agent should take: the higher EV.

    EV ties resolve to the sure side when the problem has one, else to
    the first stored alternative.
    """
    first, second = problem.alternatives
    ev_first = expected_value(first).amount_minor
    ev_second = expected_value(second).amount_minor
    if ev_first > ev_second:
        return first.id
    if ev_second > ev_first:
        return second.id
    sure_index = sure_alternative_index(problem)
    if sure_index is not None and not is_sure(problem.alternatives[1 - sure_index]):
        return problem.alternatives[sure_index].id
    return first.id


def assess(problem: DecisionProblem, choice: Choice, mode: Mode = Mode.CANONICAL) -> RiskAssessment:
    """Run the full assessment of a choice against its problem."""
    if choice.problem_id != problem.id:
        raise InvalidValue(f"choice {choice.id!r} belongs to problem {choice.problem_id!r}, not {problem.id!r}")
    problem.alternative(choice.chosen_alternative_id)
    mode = Mode(mode)
    evs = {alt.id: expected_value(alt) for alt in problem.alternatives}
    verdict, trace = is_risk_seeking_for_losses_choice(problem, choice.chosen_alternative_id, mode)
    cell: FourfoldCell | None = None
    layout = canonicalize(problem, choice.chosen_alternative_id)
    if layout is not None:
        try:
            cell = classify_risk_context(problem, problem.index_of(layout.gamble.id))
        except UnsupportedShape:
            cell = None
    return RiskAssessment(
        problem_id=problem.id,
        choice_id=choice.id,
        ev_per_alternative=evs,
        fourfold_cell=cell,
        risk_seeking_for_losses=verdict,
        trace=trace,
        mode=mode,
        unbiased_best_alternative_id=unbiased_best_alternative_id(problem),
    )
