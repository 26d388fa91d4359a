"""Append-only event history with JSONL persistence.

Every state change is one immutable event: a strictly increasing
sequence number, a store-assigned UTC timestamp, a kind, and a JSON
payload.  On disk each event is a single canonically-serialized JSON
line (sorted keys, no whitespace), so export and re-import round-trip
byte for byte.

Recovery rule: a torn final line (the only kind of damage an append
crash can cause) is dropped with a warning; any other malformed or
out-of-order content raises CorruptLog.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .errors import AbiError
from .model import ProblemValidationError, validate_problem

SCHEMA_VERSION = 1

RATING_MIN, RATING_MAX = 0, 10
LIKERT_MIN, LIKERT_MAX = 1, 5


class EventKind(str, Enum):
    PROBLEM_CREATED = "ProblemCreated"
    CHOICE_MADE = "ChoiceMade"
    ASSESSMENT_ISSUED = "AssessmentIssued"
    ALERT_ACKNOWLEDGED = "AlertAcknowledged"
    RATINGS_RECORDED = "RatingsRecorded"
    AGREEMENT_RECORDED = "AgreementRecorded"
    CHOICE_REVISED = "ChoiceRevised"


class RatingPhase(str, Enum):
    BEFORE_ALERT = "before_alert"
    AFTER_ALERT = "after_alert"


class StorageError(AbiError):
    """The underlying file could not be read or written."""


class CorruptLog(AbiError):
    """The log contains damage beyond a torn final line."""


class SchemaError(AbiError):
    """An event does not match its declared kind and version."""


class ReferentialError(AbiError):
    """An event references ids that the log has never seen."""


@dataclass(frozen=True)
class HistoryEvent:
    seq: int
    ts: str
    kind: EventKind
    payload: Mapping[str, Any]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "v": SCHEMA_VERSION,
            "seq": self.seq,
            "ts": self.ts,
            "kind": self.kind.value,
            "payload": self.payload,
        }


def canonical_line(event: HistoryEvent) -> str:
    return json.dumps(event.to_json_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _require(condition: bool, error: type[AbiError], message: str) -> None:
    if not condition:
        raise error(message)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class _Index:
    """Referential state accumulated while replaying a log."""

    def __init__(self) -> None:
        self.problems: dict[str, dict] = {}
        self.choices: dict[str, dict] = {}
        self.assessments: dict[str, dict] = {}
        self.acknowledged: set[str] = set()
        self.rating_phases: dict[str, set[str]] = {}
        self.agreements: set[str] = set()
        self.revisions: dict[str, str] = {}  # initial choice id -> revised choice id
        self.session_phases: dict[tuple[str, str], set[str]] = {}

    def problem_alternative_ids(self, problem_id: str) -> list[str]:
        return [a["id"] for a in self.problems[problem_id]["alternatives"]]

    def validate_and_apply(self, kind: EventKind, payload: Mapping[str, Any]) -> None:
        _require(isinstance(payload, Mapping), SchemaError, "payload must be an object")
        handler = {
            EventKind.PROBLEM_CREATED: self._problem_created,
            EventKind.CHOICE_MADE: self._choice_made,
            EventKind.ASSESSMENT_ISSUED: self._assessment_issued,
            EventKind.ALERT_ACKNOWLEDGED: self._alert_acknowledged,
            EventKind.RATINGS_RECORDED: self._ratings_recorded,
            EventKind.AGREEMENT_RECORDED: self._agreement_recorded,
            EventKind.CHOICE_REVISED: self._choice_revised,
        }[kind]
        handler(payload)

    def _problem_created(self, payload: Mapping[str, Any]) -> None:
        raw = payload.get("problem")
        _require(isinstance(raw, Mapping), SchemaError, "ProblemCreated payload needs a problem object")
        try:
            problem = validate_problem(raw)
        except ProblemValidationError as exc:
            raise SchemaError(f"ProblemCreated holds an invalid problem: {exc}") from exc
        _require(
            problem.id not in self.problems,
            ReferentialError,
            f"problem {problem.id!r} already exists in the log",
        )
        self.problems[problem.id] = dict(raw)

    def _check_choice_shape(self, choice: Any, expected_phase: str) -> Mapping[str, Any]:
        _require(isinstance(choice, Mapping), SchemaError, "payload needs a choice object")
        for key in ("id", "problem_id", "agent_id", "chosen_alternative_id", "phase"):
            _require(
                isinstance(choice.get(key), str) and choice[key] != "",
                SchemaError,
                f"choice.{key} must be a non-empty string",
            )
        _require(
            choice["phase"] == expected_phase,
            SchemaError,
            f"choice phase must be {expected_phase!r}, got {choice['phase']!r}",
        )
        _require(
            choice["problem_id"] in self.problems,
            ReferentialError,
            f"choice references unknown problem {choice['problem_id']!r}",
        )
        _require(
            choice["chosen_alternative_id"] in self.problem_alternative_ids(choice["problem_id"]),
            ReferentialError,
            f"choice references unknown alternative {choice['chosen_alternative_id']!r}",
        )
        _require(
            choice["id"] not in self.choices,
            ReferentialError,
            f"choice id {choice['id']!r} already used",
        )
        return choice

    def _choice_made(self, payload: Mapping[str, Any]) -> None:
        choice = self._check_choice_shape(payload.get("choice"), "initial")
        key = (choice["agent_id"], choice["problem_id"])
        phases = self.session_phases.setdefault(key, set())
        _require(
            "initial" not in phases,
            ReferentialError,
            f"agent {choice['agent_id']!r} already chose on problem {choice['problem_id']!r}",
        )
        phases.add("initial")
        self.choices[choice["id"]] = dict(choice)

    def _choice_revised(self, payload: Mapping[str, Any]) -> None:
        choice = self._check_choice_shape(payload.get("choice"), "revised")
        initial_id = payload.get("initial_choice_id")
        _require(
            isinstance(initial_id, str) and initial_id in self.choices,
            ReferentialError,
            f"revision references unknown initial choice {initial_id!r}",
        )
        initial = self.choices[initial_id]
        _require(
            initial["phase"] == "initial",
            ReferentialError,
            f"revision must reference an initial choice, {initial_id!r} is {initial['phase']!r}",
        )
        _require(
            (initial["agent_id"], initial["problem_id"])
            == (choice["agent_id"], choice["problem_id"]),
            ReferentialError,
            "revised choice must keep the agent and problem of the initial choice",
        )
        _require(
            initial_id not in self.revisions,
            ReferentialError,
            f"choice {initial_id!r} was already revised",
        )
        _require(
            isinstance(payload.get("confirmed"), bool),
            SchemaError,
            "ChoiceRevised payload needs a boolean confirmed flag",
        )
        key = (choice["agent_id"], choice["problem_id"])
        self.session_phases.setdefault(key, set()).add("revised")
        self.choices[choice["id"]] = dict(choice)
        self.revisions[initial_id] = choice["id"]

    def _assessment_issued(self, payload: Mapping[str, Any]) -> None:
        assessment = payload.get("assessment")
        _require(isinstance(assessment, Mapping), SchemaError, "payload needs an assessment object")
        for key in ("problem_id", "choice_id", "unbiased_best_alternative_id", "mode"):
            _require(
                isinstance(assessment.get(key), str) and assessment[key] != "",
                SchemaError,
                f"assessment.{key} must be a non-empty string",
            )
        _require(
            isinstance(assessment.get("risk_seeking_for_losses"), bool),
            SchemaError,
            "assessment.risk_seeking_for_losses must be a boolean",
        )
        _require(
            isinstance(assessment.get("ev_per_alternative"), Mapping),
            SchemaError,
            "assessment.ev_per_alternative must be an object",
        )
        choice_id = assessment["choice_id"]
        _require(
            choice_id in self.choices,
            ReferentialError,
            f"assessment references unknown choice {choice_id!r}",
        )
        _require(
            self.choices[choice_id]["problem_id"] == assessment["problem_id"],
            ReferentialError,
            "assessment problem does not match its choice",
        )
        _require(
            choice_id not in self.assessments,
            ReferentialError,
            f"choice {choice_id!r} was already assessed",
        )
        self.assessments[choice_id] = dict(assessment)

    def _alert_acknowledged(self, payload: Mapping[str, Any]) -> None:
        choice_id = payload.get("choice_id")
        _require(
            isinstance(choice_id, str) and choice_id in self.choices,
            ReferentialError,
            f"acknowledgement references unknown choice {choice_id!r}",
        )
        _require(
            choice_id in self.assessments,
            ReferentialError,
            f"acknowledgement for choice {choice_id!r} precedes its assessment",
        )
        self.acknowledged.add(choice_id)

    def _ratings_recorded(self, payload: Mapping[str, Any]) -> None:
        rating = payload.get("rating")
        _require(isinstance(rating, Mapping), SchemaError, "payload needs a rating object")
        choice_id = rating.get("choice_id")
        _require(
            isinstance(choice_id, str) and choice_id in self.choices,
            ReferentialError,
            f"rating references unknown choice {choice_id!r}",
        )
        phase = rating.get("phase")
        _require(
            phase in (RatingPhase.BEFORE_ALERT.value, RatingPhase.AFTER_ALERT.value),
            SchemaError,
            f"rating phase must be before_alert or after_alert, got {phase!r}",
        )
        ratings = rating.get("ratings")
        _require(isinstance(ratings, Mapping), SchemaError, "rating.ratings must be an object")
        problem_id = self.choices[choice_id]["problem_id"]
        expected = set(self.problem_alternative_ids(problem_id))
        _require(
            set(ratings.keys()) == expected,
            SchemaError,
            f"rating must cover exactly the alternatives {sorted(expected)}",
        )
        for alt_id, value in ratings.items():
            _require(
                _is_int(value) and RATING_MIN <= value <= RATING_MAX,
                SchemaError,
                f"rating for {alt_id!r} must be an integer in [{RATING_MIN}, {RATING_MAX}]",
            )
        phases = self.rating_phases.setdefault(choice_id, set())
        _require(
            phase not in phases,
            ReferentialError,
            f"choice {choice_id!r} already has a {phase} rating",
        )
        phases.add(phase)

    def _agreement_recorded(self, payload: Mapping[str, Any]) -> None:
        agreement = payload.get("agreement")
        _require(isinstance(agreement, Mapping), SchemaError, "payload needs an agreement object")
        choice_id = agreement.get("choice_id")
        _require(
            isinstance(choice_id, str) and choice_id in self.choices,
            ReferentialError,
            f"agreement references unknown choice {choice_id!r}",
        )
        for key in ("q1_bias_agreement", "q2_insight_agreement"):
            _require(
                _is_int(agreement.get(key)) and LIKERT_MIN <= agreement[key] <= LIKERT_MAX,
                SchemaError,
                f"agreement.{key} must be an integer in [{LIKERT_MIN}, {LIKERT_MAX}]",
            )
        _require(
            choice_id not in self.agreements,
            ReferentialError,
            f"choice {choice_id!r} already has an agreement response",
        )
        self.agreements.add(choice_id)


class EventLog:
    """Append-only event store, optionally file-backed.

    Appends are serialized by a lock and flushed before returning.  The
    constructor replays an existing file; a torn final line is dropped
    (and the file repaired) with a warning recorded in ``warnings``.
    """

    def __init__(self, path: str | Path | None = None, clock: Callable[[], str] | None = None):
        self._path = Path(path) if path is not None else None
        self._clock = clock or _utc_now_iso
        self._lock = threading.Lock()
        self._events: list[HistoryEvent] = []
        self._index = _Index()
        self._warnings: list[str] = []
        self._fh = None
        if self._path is not None:
            self._open_file()

    # -- file handling ------------------------------------------------

    def _open_file(self) -> None:
        assert self._path is not None
        try:
            raw = self._path.read_bytes() if self._path.exists() else b""
        except OSError as exc:
            raise StorageError(f"cannot read {self._path}: {exc}") from exc
        good_bytes = self._replay(raw)
        try:
            if good_bytes < len(raw):
                with open(self._path, "r+b") as fh:
                    fh.truncate(good_bytes)
            elif self._needs_newline:
                with open(self._path, "ab") as fh:
                    fh.write(b"\n")
            self._fh = open(self._path, "a", encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot open {self._path} for append: {exc}") from exc

    def _replay(self, raw: bytes) -> int:
        """Parse raw bytes, ingesting events; returns the kept byte length.

        Only an unparseable final line without trailing newline (the
        signature of an interrupted append) is dropped; everything else
        that fails raises CorruptLog.
        """
        self._needs_newline = False
        if not raw:
            return 0
        offset = 0
        lines = raw.split(b"\n")
        has_trailing_newline = lines[-1] == b""
        if has_trailing_newline:
            lines.pop()
        last_index = len(lines) - 1
        for i, line in enumerate(lines):
            line_has_newline = i < last_index or has_trailing_newline
            try:
                doc = json.loads(line.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                if i == last_index and not line_has_newline:
                    self._warnings.append(
                        f"recovered from torn final line {i + 1}: discarded {len(line)} bytes"
                    )
                    return offset
                raise CorruptLog(f"line {i + 1}: not valid JSON: {exc}") from exc
            try:
                event = self._event_from_doc(doc, expected_seq=len(self._events) + 1, line_no=i + 1)
                self._index.validate_and_apply(event.kind, event.payload)
            except (SchemaError, ReferentialError, CorruptLog) as exc:
                raise CorruptLog(str(exc)) from exc
            self._events.append(event)
            offset += len(line) + (1 if line_has_newline else 0)
            if not line_has_newline:
                self._needs_newline = True
        return offset

    @staticmethod
    def _event_from_doc(doc: Any, expected_seq: int, line_no: int) -> HistoryEvent:
        if not isinstance(doc, Mapping):
            raise SchemaError(f"line {line_no}: event must be a JSON object")
        if doc.get("v") != SCHEMA_VERSION:
            raise SchemaError(f"line {line_no}: unknown schema version {doc.get('v')!r}")
        kind_raw = doc.get("kind")
        try:
            kind = EventKind(kind_raw)
        except ValueError:
            raise SchemaError(f"line {line_no}: unknown event kind {kind_raw!r}") from None
        seq = doc.get("seq")
        if not _is_int(seq) or seq != expected_seq:
            raise CorruptLog(f"line {line_no}: expected seq {expected_seq}, got {seq!r}")
        ts = doc.get("ts")
        if not isinstance(ts, str) or not ts:
            raise SchemaError(f"line {line_no}: ts must be a non-empty string")
        payload = doc.get("payload")
        if not isinstance(payload, Mapping):
            raise SchemaError(f"line {line_no}: payload must be an object")
        return HistoryEvent(seq=seq, ts=ts, kind=kind, payload=payload)

    # -- public API ----------------------------------------------------

    @property
    def path(self) -> Path | None:
        return self._path

    @property
    def warnings(self) -> tuple[str, ...]:
        return tuple(self._warnings)

    @property
    def recovered_partial_line(self) -> bool:
        return any(w.startswith("recovered") for w in self._warnings)

    def events(self) -> tuple[HistoryEvent, ...]:
        return tuple(self._events)

    def __len__(self) -> int:
        return len(self._events)

    def append_event(self, kind: EventKind | str, payload: Mapping[str, Any]) -> HistoryEvent:
        """Validate, persist, and return the new event (seq assigned here)."""
        try:
            kind = EventKind(kind)
        except ValueError:
            raise SchemaError(f"unknown event kind {kind!r}") from None
        try:
            normalized = json.loads(json.dumps(payload))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"payload is not JSON-serializable: {exc}") from exc
        with self._lock:
            self._index.validate_and_apply(kind, normalized)
            event = HistoryEvent(
                seq=len(self._events) + 1,
                ts=self._clock(),
                kind=kind,
                payload=normalized,
            )
            if self._fh is not None:
                try:
                    self._fh.write(canonical_line(event) + "\n")
                    self._fh.flush()
                except OSError as exc:
                    raise StorageError(f"cannot append to {self._path}: {exc}") from exc
            self._events.append(event)
            return event

    def load_events(
        self,
        kind: EventKind | str | None = None,
        problem_id: str | None = None,
        choice_id: str | None = None,
    ) -> list[HistoryEvent]:
        """Events in order, optionally filtered."""
        wanted_kind = EventKind(kind) if kind is not None else None
        out = []
        for event in self._events:
            if wanted_kind is not None and event.kind != wanted_kind:
                continue
            if problem_id is not None and _event_problem_id(event, self._index) != problem_id:
                continue
            if choice_id is not None and _event_choice_id(event) != choice_id:
                continue
            out.append(event)
        return out

    def export_jsonl(self) -> bytes:
        lines = [canonical_line(e) for e in self._events]
        return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""

    @classmethod
    def import_jsonl(cls, data: bytes, path: str | Path | None = None) -> "EventLog":
        """Rebuild a log from exported bytes, validating every line.

        Unknown kinds or versions raise SchemaError naming the line;
        reference violations raise ReferentialError; sequence damage
        raises CorruptLog.
        """
        log = cls(path=None)
        lines = data.split(b"\n")
        if lines and lines[-1] == b"":
            lines.pop()
        for i, line in enumerate(lines):
            if line == b"":
                raise CorruptLog(f"line {i + 1}: unexpected blank line")
            try:
                doc = json.loads(line.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise CorruptLog(f"line {i + 1}: not valid JSON: {exc}") from exc
            event = cls._event_from_doc(doc, expected_seq=len(log._events) + 1, line_no=i + 1)
            try:
                log._index.validate_and_apply(event.kind, event.payload)
            except (SchemaError, ReferentialError) as exc:
                raise type(exc)(f"line {i + 1}: {exc}") from exc
            log._events.append(event)
        if path is not None:
            target = Path(path)
            try:
                target.write_bytes(log.export_jsonl())
            except OSError as exc:
                raise StorageError(f"cannot write {target}: {exc}") from exc
            return cls(path=target)
        return log

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "EventLog":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()


def _event_choice_id(event: HistoryEvent) -> str | None:
    payload = event.payload
    if event.kind in (EventKind.CHOICE_MADE, EventKind.CHOICE_REVISED):
        return payload["choice"]["id"]
    if event.kind == EventKind.ASSESSMENT_ISSUED:
        return payload["assessment"]["choice_id"]
    if event.kind == EventKind.ALERT_ACKNOWLEDGED:
        return payload["choice_id"]
    if event.kind == EventKind.RATINGS_RECORDED:
        return payload["rating"]["choice_id"]
    if event.kind == EventKind.AGREEMENT_RECORDED:
        return payload["agreement"]["choice_id"]
    return None


def _event_problem_id(event: HistoryEvent, index: _Index) -> str | None:
    if event.kind == EventKind.PROBLEM_CREATED:
        return event.payload["problem"]["id"]
    if event.kind in (EventKind.CHOICE_MADE, EventKind.CHOICE_REVISED):
        return event.payload["choice"]["problem_id"]
    choice_id = _event_choice_id(event)
    if choice_id is not None and choice_id in index.choices:
        return index.choices[choice_id]["problem_id"]
    return None


# ---------------------------------------------------------------------------
# relational projection
# ---------------------------------------------------------------------------


@dataclass
class RelationalSnapshot:
    """Flat relational view of a replayed event stream."""

    agents: list[dict] = field(default_factory=list)
    decision_problems: list[dict] = field(default_factory=list)
    alternatives: list[dict] = field(default_factory=list)
    outcomes: list[dict] = field(default_factory=list)
    choices: list[dict] = field(default_factory=list)
    rational_value_ascriptions: list[dict] = field(default_factory=list)
    risk_assessments: list[dict] = field(default_factory=list)
    awareness_measurements: list[dict] = field(default_factory=list)
    agreement_responses: list[dict] = field(default_factory=list)
    sessions: list[dict] = field(default_factory=list)

    def table(self, name: str) -> list[dict]:
        return getattr(self, name)


def project_relational(events: Iterable[HistoryEvent]) -> RelationalSnapshot:
    """Deterministically fold events into relational rows.

    A ChoiceRevised event adds a second choice row (both rows are kept)
    and moves the owning session's final-choice pointer to it.
    """
    snapshot = RelationalSnapshot()
    agents_seen: set[str] = set()
    sessions_by_key: dict[tuple[str, str], dict] = {}

    for event in sorted(events, key=lambda e: e.seq):
        payload = event.payload
        if event.kind == EventKind.PROBLEM_CREATED:
            problem = payload["problem"]
            snapshot.decision_problems.append(
                {
                    "problem_id": problem["id"],
                    "statement": problem["statement"],
                    "currency": problem["currency"],
                }
            )
            for position, alt in enumerate(problem["alternatives"]):
                snapshot.alternatives.append(
                    {
                        "problem_id": problem["id"],
                        "alternative_id": alt["id"],
                        "label": alt.get("label", ""),
                        "position": position,
                    }
                )
                for opos, outcome in enumerate(alt["outcomes"]):
                    snapshot.outcomes.append(
                        {
                            "problem_id": problem["id"],
                            "alternative_id": alt["id"],
                            "position": opos,
                            "amount_minor": outcome["amount_minor"],
                            "probability_pct": str(outcome["probability_pct"]),
                        }
                    )
        elif event.kind in (EventKind.CHOICE_MADE, EventKind.CHOICE_REVISED):
            choice = payload["choice"]
            if choice["agent_id"] not in agents_seen:
                agents_seen.add(choice["agent_id"])
                snapshot.agents.append({"agent_id": choice["agent_id"]})
            snapshot.choices.append(
                {
                    "choice_id": choice["id"],
                    "problem_id": choice["problem_id"],
                    "agent_id": choice["agent_id"],
                    "chosen_alternative_id": choice["chosen_alternative_id"],
                    "phase": choice["phase"],
                    "ts": event.ts,
                }
            )
            key = (choice["agent_id"], choice["problem_id"])
            if event.kind == EventKind.CHOICE_MADE:
                row = {
                    "agent_id": choice["agent_id"],
                    "problem_id": choice["problem_id"],
                    "initial_choice_id": choice["id"],
                    "final_choice_id": choice["id"],
                    "final_alternative_id": choice["chosen_alternative_id"],
                    "acknowledged": False,
                }
                sessions_by_key[key] = row
                snapshot.sessions.append(row)
            else:
                row = sessions_by_key[key]
                row["final_choice_id"] = choice["id"]
                row["final_alternative_id"] = choice["chosen_alternative_id"]
        elif event.kind == EventKind.ASSESSMENT_ISSUED:
            assessment = payload["assessment"]
            cell = assessment.get("fourfold_cell")
            snapshot.risk_assessments.append(
                {
                    "choice_id": assessment["choice_id"],
                    "problem_id": assessment["problem_id"],
                    "risk_seeking_for_losses": assessment["risk_seeking_for_losses"],
                    "mode": assessment["mode"],
                    "fourfold_domain": cell["domain"] if cell else None,
                    "fourfold_band": cell["probability_band"] if cell else None,
                    "unbiased_best_alternative_id": assessment["unbiased_best_alternative_id"],
                }
            )
            for alt_id, ev in sorted(assessment["ev_per_alternative"].items()):
                snapshot.rational_value_ascriptions.append(
                    {
                        "choice_id": assessment["choice_id"],
                        "alternative_id": alt_id,
                        "ev_minor": ev["amount_minor"],
                        "currency": ev["currency"],
                    }
                )
        elif event.kind == EventKind.ALERT_ACKNOWLEDGED:
            for row in snapshot.sessions:
                if row["initial_choice_id"] == payload["choice_id"]:
                    row["acknowledged"] = True
        elif event.kind == EventKind.RATINGS_RECORDED:
            rating = payload["rating"]
            snapshot.awareness_measurements.append(
                {
                    "choice_id": rating["choice_id"],
                    "phase": rating["phase"],
                    "ratings": dict(sorted(rating["ratings"].items())),
                }
            )
        elif event.kind == EventKind.AGREEMENT_RECORDED:
            agreement = payload["agreement"]
            snapshot.agreement_responses.append(
                {
                    "choice_id": agreement["choice_id"],
                    "q1_bias_agreement": agreement["q1_bias_agreement"],
                    "q2_insight_agreement": agreement["q2_insight_agreement"],
                }
            )
    return snapshot
