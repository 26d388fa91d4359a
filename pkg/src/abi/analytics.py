"""Awareness scoring and aggregate reporting over an event history.

An agent is considered aware (level 1) after a measurement when they
rate the unbiased-best alternative strictly above every other
alternative on the 0..10 scale; any tie or inversion scores level 0.
``summarize_history`` folds an event stream into the quantities the
experiment analysis needs: flag counts, per-agent before/after
awareness pairs with a signed-rank test, agreement histograms, and
agreement-by-improvement tables ready for a chi-square test.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Iterable, Mapping

from .engine import RiskAssessment
from .errors import AbiError, InvalidValue
from .history import (
    LIKERT_MAX,
    LIKERT_MIN,
    RATING_MAX,
    RATING_MIN,
    EventKind,
    HistoryEvent,
    RatingPhase,
)
from .stats import AllZeroDifferences, Hypothesis, TestResult, wilcoxon_signed_rank


class MissingRating(AbiError, KeyError):
    """A rating does not cover the alternative needed for scoring."""

    def __str__(self) -> str:
        return self.args[0] if self.args else ""


@dataclass(frozen=True)
class AwarenessRating:
    """One agent's 0..10 ratings of every alternative of one problem."""

    choice_id: str
    phase: RatingPhase
    ratings: Mapping[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", RatingPhase(self.phase))
        for alt_id, value in self.ratings.items():
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidValue(f"rating for {alt_id!r} must be an integer")
            if not RATING_MIN <= value <= RATING_MAX:
                raise InvalidValue(
                    f"rating for {alt_id!r} must be in [{RATING_MIN}, {RATING_MAX}], got {value}"
                )


@dataclass(frozen=True)
class AgreementResponse:
    """Five-point agreement answers recorded after an alert."""

    choice_id: str
    q1_bias_agreement: int
    q2_insight_agreement: int

    def __post_init__(self) -> None:
        for name in ("q1_bias_agreement", "q2_insight_agreement"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidValue(f"{name} must be an integer")
            if not LIKERT_MIN <= value <= LIKERT_MAX:
                raise InvalidValue(f"{name} must be in [{LIKERT_MIN}, {LIKERT_MAX}], got {value}")


def _level_from_ratings(ratings: Mapping[str, int], best_alternative_id: str) -> int:
    if best_alternative_id not in ratings:
        raise MissingRating(f"no rating for alternative {best_alternative_id!r}")
    best = ratings[best_alternative_id]
    others = [v for k, v in ratings.items() if k != best_alternative_id]
    return 1 if all(best > v for v in others) else 0


def awareness_level(rating: AwarenessRating, assessment: RiskAssessment) -> int:
    """0 or 1: did the rating strictly favor the unbiased-best alternative?

    Raises MissingRating when the rating does not cover every assessed
    alternative.
    """
    for alt_id in assessment.ev_per_alternative:
        if alt_id not in rating.ratings:
            raise MissingRating(f"no rating for alternative {alt_id!r}")
    return _level_from_ratings(rating.ratings, assessment.unbiased_best_alternative_id)


@dataclass(frozen=True)
class AwarenessPair:
    agent_id: str
    problem_id: str
    choice_id: str
    before: int
    after: int


@dataclass(frozen=True)
class AwarenessReport:
    """Aggregates over one history: flags, awareness, and agreement."""

    n_problems: int
    n_initial_choices: int
    n_flagged: int
    flagged_fraction: Decimal
    awareness_by_agent: tuple[AwarenessPair, ...]
    wilcoxon: TestResult | None
    q1_histogram: Mapping[int, int]
    q2_histogram: Mapping[int, int]
    q1_by_improvement: tuple[tuple[int, int], ...]
    q2_by_improvement: tuple[tuple[int, int], ...]

    @property
    def awareness_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((p.before, p.after) for p in self.awareness_by_agent)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "n_problems": self.n_problems,
            "n_initial_choices": self.n_initial_choices,
            "n_flagged": self.n_flagged,
            "flagged_fraction": str(self.flagged_fraction),
            "awareness_pairs": [
                {
                    "agent_id": p.agent_id,
                    "problem_id": p.problem_id,
                    "choice_id": p.choice_id,
                    "before": p.before,
                    "after": p.after,
                }
                for p in self.awareness_by_agent
            ],
            "wilcoxon": self.wilcoxon.to_json_dict() if self.wilcoxon else None,
            "q1_histogram": {str(k): v for k, v in self.q1_histogram.items()},
            "q2_histogram": {str(k): v for k, v in self.q2_histogram.items()},
            "q1_by_improvement": [list(row) for row in self.q1_by_improvement],
            "q2_by_improvement": [list(row) for row in self.q2_by_improvement],
        }


def _flagged_fraction(n_flagged: int, n_choices: int) -> Decimal:
    if n_choices == 0:
        return Decimal(0)
    return (Decimal(n_flagged) / Decimal(n_choices)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP)


def summarize_history(events: Iterable[HistoryEvent]) -> AwarenessReport:
    """Fold an event stream into an AwarenessReport.

    Awareness pairs cover flagged initial choices that have both a
    before-alert and an after-alert rating, in choice order.  The
    signed-rank test (one-sided, improvement) is omitted when there are
    no pairs or no nonzero differences.  Agreement-by-improvement
    tables have one row per agreement level 1..5 and columns (did not
    improve, improved).
    """
    ordered = sorted(events, key=lambda e: e.seq)
    problems: set[str] = set()
    initial_choices: dict[str, dict] = {}
    choice_order: list[str] = []
    assessments: dict[str, dict] = {}
    ratings: dict[tuple[str, str], dict] = {}
    agreements: dict[str, dict] = {}

    for event in ordered:
        payload = event.payload
        if event.kind == EventKind.PROBLEM_CREATED:
            problems.add(payload["problem"]["id"])
        elif event.kind == EventKind.CHOICE_MADE:
            choice = payload["choice"]
            initial_choices[choice["id"]] = choice
            choice_order.append(choice["id"])
        elif event.kind == EventKind.ASSESSMENT_ISSUED:
            assessment = payload["assessment"]
            assessments[assessment["choice_id"]] = assessment
        elif event.kind == EventKind.RATINGS_RECORDED:
            rating = payload["rating"]
            ratings[(rating["choice_id"], rating["phase"])] = rating
        elif event.kind == EventKind.AGREEMENT_RECORDED:
            agreement = payload["agreement"]
            agreements[agreement["choice_id"]] = agreement

    flagged_ids = [
        cid
        for cid in choice_order
        if cid in assessments and assessments[cid]["risk_seeking_for_losses"]
    ]

    pairs: list[AwarenessPair] = []
    for cid in flagged_ids:
        before = ratings.get((cid, RatingPhase.BEFORE_ALERT.value))
        after = ratings.get((cid, RatingPhase.AFTER_ALERT.value))
        if before is None or after is None:
            continue
        best = assessments[cid]["unbiased_best_alternative_id"]
        choice = initial_choices[cid]
        pairs.append(
            AwarenessPair(
                agent_id=choice["agent_id"],
                problem_id=choice["problem_id"],
                choice_id=cid,
                before=_level_from_ratings(before["ratings"], best),
                after=_level_from_ratings(after["ratings"], best),
            )
        )

    wilcoxon: TestResult | None = None
    if pairs:
        try:
            wilcoxon = wilcoxon_signed_rank(
                [(p.before, p.after) for p in pairs], alternative=Hypothesis.GREATER.value
            )
        except AllZeroDifferences:
            wilcoxon = None

    q1_histogram = {level: 0 for level in range(LIKERT_MIN, LIKERT_MAX + 1)}
    q2_histogram = {level: 0 for level in range(LIKERT_MIN, LIKERT_MAX + 1)}
    for agreement in agreements.values():
        q1_histogram[agreement["q1_bias_agreement"]] += 1
        q2_histogram[agreement["q2_insight_agreement"]] += 1

    q1_table = [[0, 0] for _ in range(LIKERT_MIN, LIKERT_MAX + 1)]
    q2_table = [[0, 0] for _ in range(LIKERT_MIN, LIKERT_MAX + 1)]
    for pair in pairs:
        agreement = agreements.get(pair.choice_id)
        if agreement is None:
            continue
        improved = 1 if pair.after > pair.before else 0
        q1_table[agreement["q1_bias_agreement"] - LIKERT_MIN][improved] += 1
        q2_table[agreement["q2_insight_agreement"] - LIKERT_MIN][improved] += 1

    return AwarenessReport(
        n_problems=len(problems),
        n_initial_choices=len(initial_choices),
        n_flagged=len(flagged_ids),
        flagged_fraction=_flagged_fraction(len(flagged_ids), len(initial_choices)),
        awareness_by_agent=tuple(pairs),
        wilcoxon=wilcoxon,
        q1_histogram=q1_histogram,
        q2_histogram=q2_histogram,
        q1_by_improvement=tuple(tuple(row) for row in q1_table),
        q2_by_improvement=tuple(tuple(row) for row in q2_table),
    )
