"""Expected values, loss decision weights, and risk-context classification.

All arithmetic is exact decimal; nothing here goes through binary
floating point.  The decision-weight table gives the subjective weight
typically attached to stated loss probabilities in the 50..100 band,
with linear interpolation between the published anchors.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import Enum
from typing import Any

from .errors import AbiError
from .model import Alternative, DecisionProblem, Outcome, Probability, decimal_str

HIGH_PROBABILITY_THRESHOLD = Decimal(50)

# (stated probability %, decision weight) anchors for the loss domain,
# valid for probabilities in [50, 100] only
LOSS_DECISION_WEIGHTS: tuple[tuple[Decimal, Decimal], ...] = (
    (Decimal(50), Decimal(45)),
    (Decimal(60), Decimal(52)),
    (Decimal(75), Decimal(63)),
    (Decimal(80), Decimal(67)),
    (Decimal(90), Decimal("77.5")),
    (Decimal(95), Decimal(85)),
    (Decimal(98), Decimal("91.5")),
    (Decimal(99), Decimal("94.5")),
    (Decimal(100), Decimal(100)),
)


class OutOfTableRange(AbiError, ValueError):
    """The probability falls outside the tabulated [50, 100] band."""


class UnsupportedShape(AbiError, ValueError):
    """The problem shape does not fit the risk-context taxonomy."""


class Domain(str, Enum):
    GAINS = "gains"
    LOSSES = "losses"
    MIXED = "mixed"
    NEUTRAL = "neutral"


class ProbabilityBand(str, Enum):
    HIGH = "high"
    LOW = "low"


class RiskPreference(str, Enum):
    RISK_AVERSE = "risk_averse"
    RISK_SEEKING = "risk_seeking"


class FourfoldEffect(str, Enum):
    CERTAINTY = "certainty"
    POSSIBILITY = "possibility"


# (domain, band) -> (predicted preference, effect driving it)
_FOURFOLD: dict[tuple[Domain, ProbabilityBand], tuple[RiskPreference, FourfoldEffect]] = {
    (Domain.GAINS, ProbabilityBand.HIGH): (RiskPreference.RISK_AVERSE, FourfoldEffect.CERTAINTY),
    (Domain.LOSSES, ProbabilityBand.HIGH): (RiskPreference.RISK_SEEKING, FourfoldEffect.CERTAINTY),
    (Domain.GAINS, ProbabilityBand.LOW): (RiskPreference.RISK_SEEKING, FourfoldEffect.POSSIBILITY),
    (Domain.LOSSES, ProbabilityBand.LOW): (RiskPreference.RISK_AVERSE, FourfoldEffect.POSSIBILITY),
}


@dataclass(frozen=True)
class FourfoldCell:
    """One cell of the fourfold pattern of risk attitudes."""

    domain: Domain
    probability_band: ProbabilityBand
    predicted_preference: RiskPreference
    effect: FourfoldEffect

    @classmethod
    def for_pattern(cls, domain: Domain, band: ProbabilityBand) -> "FourfoldCell":
        if domain not in (Domain.GAINS, Domain.LOSSES):
            raise UnsupportedShape(f"no fourfold cell for domain {domain.value}")
        preference, effect = _FOURFOLD[(domain, band)]
        return cls(domain, band, preference, effect)

    def to_json_dict(self) -> dict[str, str]:
        return {
            "domain": self.domain.value,
            "probability_band": self.probability_band.value,
            "predicted_preference": self.predicted_preference.value,
            "effect": self.effect.value,
        }


@dataclass(frozen=True)
class ExpectedValue:
    """An expected monetary value in (possibly fractional) minor units."""

    amount_minor: Decimal
    currency: str

    def __str__(self) -> str:
        return f"{decimal_str(self.amount_minor)} {self.currency}"


def expected_value(alternative: Alternative) -> ExpectedValue:
    """Probability-weighted sum of the alternative's outcomes, exact."""
    with localcontext() as ctx:
        ctx.prec = 50
        total = sum(
            (o.value.amount_minor * o.probability.fraction_of_one() for o in alternative.outcomes),
            Decimal(0),
        )
    return ExpectedValue(total, alternative.currency)


def _as_probability_value(probability: Any) -> Decimal:
    if isinstance(probability, Probability):
        return probability.value
    return Probability.of(probability).value


def decision_weight_for_loss(probability: Any) -> Decimal:
    """Decision weight for a stated loss probability in [50, 100].

    Anchor probabilities return their tabulated weight exactly; values
    between anchors interpolate linearly.  Below 50 the table does not
    apply and OutOfTableRange is raised.
    """
    p = _as_probability_value(probability)
    if p < LOSS_DECISION_WEIGHTS[0][0] or p > LOSS_DECISION_WEIGHTS[-1][0]:
        raise OutOfTableRange(f"probability {decimal_str(p)} outside tabulated range [50, 100]")
    for (p0, w0), (p1, w1) in zip(LOSS_DECISION_WEIGHTS, LOSS_DECISION_WEIGHTS[1:]):
        if p == p0:
            return w0
        if p0 < p < p1:
            with localcontext() as ctx:
                ctx.prec = 50
                return w0 + (p - p0) * (w1 - w0) / (p1 - p0)
    return LOSS_DECISION_WEIGHTS[-1][1]


def classify_alternative_domain(alternative: Alternative) -> Domain:
    """Classify by the signs of outcomes that can actually occur."""
    amounts = [o.value.amount_minor for o in alternative.effective_outcomes()]
    has_gain = any(a > 0 for a in amounts)
    has_loss = any(a < 0 for a in amounts)
    if has_gain and has_loss:
        return Domain.MIXED
    if has_gain:
        return Domain.GAINS
    if has_loss:
        return Domain.LOSSES
    return Domain.NEUTRAL


def is_sure(alternative: Alternative) -> bool:
    """True when exactly one outcome has nonzero probability."""
    return len(alternative.effective_outcomes()) == 1


def sure_alternative_index(problem: DecisionProblem) -> int | None:
    """Index of the single effectively-sure alternative, if exactly one."""
    sure = [i for i, alt in enumerate(problem.alternatives) if is_sure(alt)]
    if len(sure) == 1:
        return sure[0]
    return None


def principal_outcome_index(alternative: Alternative) -> int:
    """Position of the outcome that defines the alternative's risk profile.

    Preference order: among effective outcomes with a nonzero amount,
    the one with the largest absolute amount (ties broken by higher
    probability).  An all-zero alternative falls back to its most
    probable effective outcome.
    """
    candidates = [
        i
        for i, o in enumerate(alternative.outcomes)
        if o.probability.value > 0 and o.value.amount_minor != 0
    ]
    if not candidates:
        candidates = [i for i, o in enumerate(alternative.outcomes) if o.probability.value > 0]
    return max(
        candidates,
        key=lambda i: (
            abs(alternative.outcomes[i].value.amount_minor),
            alternative.outcomes[i].probability.value,
        ),
    )


def principal_outcome(alternative: Alternative) -> Outcome:
    return alternative.outcomes[principal_outcome_index(alternative)]


def classify_risk_context(problem: DecisionProblem, gamble_index: int) -> FourfoldCell:
    """Fourfold cell for the gamble side of a sure-vs-gamble problem.

    The probability band is high when the gamble's principal outcome
    carries probability >= 50, low otherwise.  Mixed-sign or all-zero
    gambles do not fit the pattern and raise UnsupportedShape.
    """
    gamble = problem.alternatives[gamble_index]
    domain = classify_alternative_domain(gamble)
    if domain not in (Domain.GAINS, Domain.LOSSES):
        raise UnsupportedShape(f"gamble domain {domain.value} has no fourfold cell")
    principal = principal_outcome(gamble)
    band = (
        ProbabilityBand.HIGH
        if principal.probability.value >= HIGH_PROBABILITY_THRESHOLD
        else ProbabilityBand.LOW
    )
    return FourfoldCell.for_pattern(domain, band)
