"""Domain model for binary decision problems under risk.

Value objects are frozen dataclasses: money in integer minor units,
probabilities as exact decimal percentages.  Construction enforces the
local invariants of each type; ``validate_problem`` checks raw mapping
data and reports every violation at once instead of failing on the
first one.  ``parse_problem_file`` / ``serialize_problems`` define the
JSON wire format and round-trip losslessly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .errors import AbiError, InvalidValue

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_CURRENCY_RE = re.compile(r"^[A-Z]{3}$")

HUNDRED = Decimal(100)


def decimal_str(value: Decimal) -> str:
    """Render a Decimal in plain notation, never scientific."""
    text = format(value.normalize(), "f")
    # normalize() keeps "-0"; canonical form drops the sign of zero
    return "0" if text == "-0" else text


def parse_probability_literal(raw: Any) -> Decimal:
    """Convert a JSON-level probability (str, int, or float) to Decimal.

    Raises InvalidValue when the literal is not numeric at all; range
    checks happen in Probability itself.
    """
    if isinstance(raw, bool):
        raise InvalidValue(f"probability must be numeric, got {raw!r}")
    if isinstance(raw, Decimal):
        return raw
    if isinstance(raw, int):
        return Decimal(raw)
    if isinstance(raw, float):
        # floats are tolerated on input but converted through repr so
        # "95.5" stays 95.5 rather than a binary approximation
        raw = repr(raw)
    if isinstance(raw, str):
        try:
            value = Decimal(raw)
        except InvalidOperation as exc:
            raise InvalidValue(f"probability literal {raw!r} is not a decimal number") from exc
        if not value.is_finite():
            raise InvalidValue(f"probability literal {raw!r} is not finite")
        return value
    raise InvalidValue(f"probability must be str, int, or decimal, got {type(raw).__name__}")


@dataclass(frozen=True)
class Money:
    """An exact amount in minor units (cents) of a currency."""

    amount_minor: int
    currency: str

    def __post_init__(self) -> None:
        if isinstance(self.amount_minor, bool) or not isinstance(self.amount_minor, int):
            raise InvalidValue(f"amount_minor must be int, got {type(self.amount_minor).__name__}")
        if not INT64_MIN <= self.amount_minor <= INT64_MAX:
            raise InvalidValue(f"amount_minor {self.amount_minor} outside 64-bit range")
        if not isinstance(self.currency, str) or not _CURRENCY_RE.match(self.currency):
            raise InvalidValue(f"currency must be a 3-letter uppercase code, got {self.currency!r}")


@dataclass(frozen=True)
class Probability:
    """A percentage in [0, 100] with at most two fractional digits."""

    value: Decimal

    def __post_init__(self) -> None:
        if not isinstance(self.value, Decimal):
            raise InvalidValue(f"probability value must be Decimal, got {type(self.value).__name__}")
        if not self.value.is_finite():
            raise InvalidValue("probability must be finite")
        if not (0 <= self.value <= HUNDRED):
            raise InvalidValue(f"probability {decimal_str(self.value)} outside [0, 100]")
        if -self.value.as_tuple().exponent > 2:
            raise InvalidValue(f"probability {decimal_str(self.value)} has more than 2 fractional digits")

    @classmethod
    def of(cls, raw: Any) -> "Probability":
        return cls(parse_probability_literal(raw))

    def fraction_of_one(self) -> Decimal:
        return self.value / HUNDRED

    def __str__(self) -> str:
        return decimal_str(self.value)


@dataclass(frozen=True)
class Outcome:
    """One branch of an alternative: a money amount with its probability."""

    value: Money
    probability: Probability


@dataclass(frozen=True)
class Alternative:
    """One selectable course of action holding one or two outcomes."""

    id: str
    label: str
    outcomes: tuple[Outcome, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InvalidValue("alternative id must be a non-empty string")
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not 1 <= len(self.outcomes) <= 2:
            raise InvalidValue(f"alternative {self.id!r} must hold 1 or 2 outcomes, got {len(self.outcomes)}")
        total = sum((o.probability.value for o in self.outcomes), Decimal(0))
        if total != HUNDRED:
            raise InvalidValue(
                f"alternative {self.id!r} probabilities sum to {decimal_str(total)}, expected 100"
            )
        currencies = {o.value.currency for o in self.outcomes}
        if len(currencies) != 1:
            raise InvalidValue(f"alternative {self.id!r} mixes currencies {sorted(currencies)}")

    @property
    def currency(self) -> str:
        return self.outcomes[0].value.currency

    def effective_outcomes(self) -> tuple[Outcome, ...]:
        """Outcomes that can actually occur (probability > 0)."""
        return tuple(o for o in self.outcomes if o.probability.value > 0)


@dataclass(frozen=True)
class DecisionProblem:
    """A choice between exactly two alternatives in one currency."""

    id: str
    statement: str
    alternatives: tuple[Alternative, Alternative]
    currency: str

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InvalidValue("problem id must be a non-empty string")
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if len(self.alternatives) != 2:
            raise InvalidValue(f"problem {self.id!r} must hold exactly 2 alternatives")
        ids = [a.id for a in self.alternatives]
        if len(set(ids)) != len(ids):
            raise InvalidValue(f"problem {self.id!r} has duplicate alternative ids")
        for alt in self.alternatives:
            if alt.currency != self.currency:
                raise InvalidValue(
                    f"alternative {alt.id!r} uses {alt.currency}, problem currency is {self.currency}"
                )

    def alternative(self, alt_id: str) -> Alternative:
        for alt in self.alternatives:
            if alt.id == alt_id:
                return alt
        raise UnknownAlternative(f"problem {self.id!r} has no alternative {alt_id!r}")

    def index_of(self, alt_id: str) -> int:
        for i, alt in enumerate(self.alternatives):
            if alt.id == alt_id:
                return i
        raise UnknownAlternative(f"problem {self.id!r} has no alternative {alt_id!r}")


class UnknownAlternative(AbiError, KeyError):
    """An alternative id does not belong to the problem at hand."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0] if self.args else ""


class ChoicePhase(str, Enum):
    INITIAL = "initial"
    REVISED = "revised"


@dataclass(frozen=True)
class Choice:
    """A recorded selection of one alternative by one agent."""

    id: str
    problem_id: str
    agent_id: str
    chosen_alternative_id: str
    phase: ChoicePhase
    timestamp: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", ChoicePhase(self.phase))
        try:
            parsed = datetime.fromisoformat(self.timestamp)
        except ValueError as exc:
            raise InvalidValue(f"timestamp {self.timestamp!r} is not ISO-8601") from exc
        if parsed.tzinfo is None or parsed.utcoffset() != timedelta(0):
            raise InvalidValue(f"timestamp {self.timestamp!r} must be UTC")


@dataclass(frozen=True)
class Agent:
    """A decision maker; the profile mapping is free-form metadata."""

    id: str
    display_name: str = ""
    profile: Mapping[str, str] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# raw-data validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationIssue:
    """One violation found while validating raw problem data."""

    code: str
    path: str
    message: str

    def to_json_dict(self) -> dict[str, str]:
        return {"code": self.code, "path": self.path, "message": self.message}


class ProblemValidationError(AbiError):
    """Raised with the complete list of violations for one problem."""

    def __init__(self, issues: Sequence[ValidationIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(f"{i.code} at {i.path}: {i.message}" for i in self.issues))


PROBABILITY_SUM_ERROR = "ProbabilitySumError"
ARITY_ERROR = "ArityError"
CURRENCY_MISMATCH = "CurrencyMismatch"
RANGE_ERROR = "RangeError"
SCHEMA_ERROR = "SchemaError"
DUPLICATE_ID = "DuplicateId"


def _check_str(data: Mapping[str, Any], key: str, path: str, issues: list[ValidationIssue]) -> str | None:
    value = data.get(key)
    if not isinstance(value, str) or not value:
        issues.append(ValidationIssue(SCHEMA_ERROR, f"{path}.{key}", f"{key} must be a non-empty string"))
        return None
    return value


def _validate_outcome(
    data: Any, currency: str | None, path: str, issues: list[ValidationIssue]
) -> Outcome | None:
    if not isinstance(data, Mapping):
        issues.append(ValidationIssue(SCHEMA_ERROR, path, "outcome must be an object"))
        return None
    amount = data.get("amount_minor")
    ok = True
    if isinstance(amount, bool) or not isinstance(amount, int):
        issues.append(ValidationIssue(SCHEMA_ERROR, f"{path}.amount_minor", "amount_minor must be an integer"))
        ok = False
    elif not INT64_MIN <= amount <= INT64_MAX:
        issues.append(
            ValidationIssue(RANGE_ERROR, f"{path}.amount_minor", f"{amount} outside 64-bit integer range")
        )
        ok = False
    prob: Probability | None = None
    if "probability_pct" not in data:
        issues.append(ValidationIssue(SCHEMA_ERROR, f"{path}.probability_pct", "probability_pct is required"))
        ok = False
    else:
        try:
            prob = Probability.of(data["probability_pct"])
        except InvalidValue as exc:
            issues.append(ValidationIssue(RANGE_ERROR, f"{path}.probability_pct", str(exc)))
            ok = False
    if not ok or currency is None:
        return None
    return Outcome(Money(amount, currency), prob)


def _validate_alternative(
    data: Any, currency: str | None, path: str, issues: list[ValidationIssue]
) -> Alternative | None:
    if not isinstance(data, Mapping):
        issues.append(ValidationIssue(SCHEMA_ERROR, path, "alternative must be an object"))
        return None
    alt_id = _check_str(data, "id", path, issues)
    label = data.get("label", "")
    if not isinstance(label, str):
        issues.append(ValidationIssue(SCHEMA_ERROR, f"{path}.label", "label must be a string"))
        label = ""
    raw_outcomes = data.get("outcomes")
    if not isinstance(raw_outcomes, Sequence) or isinstance(raw_outcomes, (str, bytes)):
        issues.append(ValidationIssue(SCHEMA_ERROR, f"{path}.outcomes", "outcomes must be an array"))
        return None
    if not 1 <= len(raw_outcomes) <= 2:
        issues.append(
            ValidationIssue(
                ARITY_ERROR, f"{path}.outcomes", f"expected 1 or 2 outcomes, got {len(raw_outcomes)}"
            )
        )
        return None
    outcomes: list[Outcome] = []
    for i, raw in enumerate(raw_outcomes):
        out = _validate_outcome(raw, currency, f"{path}.outcomes[{i}]", issues)
        if out is not None:
            outcomes.append(out)
    if len(outcomes) != len(raw_outcomes) or alt_id is None:
        return None
    total = sum((o.probability.value for o in outcomes), Decimal(0))
    if total != HUNDRED:
        issues.append(
            ValidationIssue(
                PROBABILITY_SUM_ERROR,
                f"{path}.outcomes",
                f"probabilities sum to {decimal_str(total)}, expected exactly 100",
            )
        )
        return None
    return Alternative(alt_id, label, tuple(outcomes))


def validate_problem(candidate: Mapping[str, Any] | DecisionProblem) -> DecisionProblem:
    """Validate raw problem data, reporting every violation at once.

    A DecisionProblem passes through unchanged (validation is
    idempotent).  Raises ProblemValidationError carrying the full list
    of issues; returns the constructed problem when clean.
    """
    if isinstance(candidate, DecisionProblem):
        return candidate
    if not isinstance(candidate, Mapping):
        raise ProblemValidationError(
            [ValidationIssue(SCHEMA_ERROR, "$", "problem must be an object")]
        )

    issues: list[ValidationIssue] = []
    problem_id = _check_str(candidate, "id", "$", issues)
    statement = _check_str(candidate, "statement", "$", issues)
    currency = candidate.get("currency")
    if not isinstance(currency, str) or not _CURRENCY_RE.match(currency):
        issues.append(
            ValidationIssue(
                CURRENCY_MISMATCH, "$.currency", "currency must be a 3-letter uppercase code"
            )
        )
        currency = None

    raw_alts = candidate.get("alternatives")
    alts: list[Alternative] = []
    if not isinstance(raw_alts, Sequence) or isinstance(raw_alts, (str, bytes)):
        issues.append(ValidationIssue(SCHEMA_ERROR, "$.alternatives", "alternatives must be an array"))
    else:
        if len(raw_alts) != 2:
            issues.append(
                ValidationIssue(
                    ARITY_ERROR, "$.alternatives", f"expected exactly 2 alternatives, got {len(raw_alts)}"
                )
            )
        for i, raw in enumerate(raw_alts):
            # a bad problem currency must not mask outcome-level issues
            alt = _validate_alternative(raw, currency or "XXX", f"$.alternatives[{i}]", issues)
            if alt is not None:
                alts.append(alt)
        ids = [a.id for a in alts]
        for dup in sorted({x for x in ids if ids.count(x) > 1}):
            issues.append(
                ValidationIssue(DUPLICATE_ID, "$.alternatives", f"alternative id {dup!r} appears twice")
            )

    if issues:
        raise ProblemValidationError(issues)
    assert problem_id is not None and statement is not None and currency is not None
    return DecisionProblem(problem_id, statement, (alts[0], alts[1]), currency)


# ---------------------------------------------------------------------------
# file parsing and serialization
# ---------------------------------------------------------------------------


class ProblemFileSyntaxError(AbiError):
    """The problem file is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        super().__init__(message)


class ProblemFileValidationError(AbiError):
    """One or more problems in the file failed validation."""

    def __init__(self, errors_by_index: Mapping[int, Sequence[ValidationIssue]]):
        self.errors_by_index = {k: list(v) for k, v in errors_by_index.items()}
        parts = [f"problems[{k}]: {len(v)} issue(s)" for k, v in sorted(self.errors_by_index.items())]
        super().__init__("; ".join(parts))


def parse_problem_file(data: bytes) -> list[DecisionProblem]:
    """Parse a problem file (UTF-8 JSON bytes) into validated problems."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ProblemFileSyntaxError(f"file is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileSyntaxError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    if not isinstance(doc, Mapping) or not isinstance(doc.get("problems"), list):
        raise ProblemFileSyntaxError('top level must be an object with a "problems" array')

    problems: list[DecisionProblem] = []
    errors: dict[int, list[ValidationIssue]] = {}
    for i, raw in enumerate(doc["problems"]):
        try:
            problems.append(validate_problem(raw))
        except ProblemValidationError as exc:
            errors[i] = exc.issues
    if errors:
        raise ProblemFileValidationError(errors)
    return problems


def outcome_to_dict(outcome: Outcome) -> dict[str, Any]:
    return {
        "amount_minor": outcome.value.amount_minor,
        "probability_pct": decimal_str(outcome.probability.value),
    }


def alternative_to_dict(alt: Alternative) -> dict[str, Any]:
    return {
        "id": alt.id,
        "label": alt.label,
        "outcomes": [outcome_to_dict(o) for o in alt.outcomes],
    }


def problem_to_dict(problem: DecisionProblem) -> dict[str, Any]:
    return {
        "id": problem.id,
        "statement": problem.statement,
        "currency": problem.currency,
        "alternatives": [alternative_to_dict(a) for a in problem.alternatives],
    }


def serialize_problems(problems: Iterable[DecisionProblem]) -> bytes:
    """Serialize problems to the JSON file format (UTF-8 bytes)."""
    doc = {"problems": [problem_to_dict(p) for p in problems]}
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8")
