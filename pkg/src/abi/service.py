"""Session workflow and HTTP facade.

``DecisionService`` drives one session per (agent, problem) pair
through the flow, appending every domain event to the history log.

Experiment flow (default): the assessment is computed at choice time
but withheld; the agent first rates the alternatives, and only then a
flagged choice triggers the alert, followed by acknowledgement, the
agreement questions, a second rating round, and the revision step.
Unflagged sessions complete right after the first rating round.

Production flow: a flagged choice is alerted immediately in the choice
response, acknowledged, and revised; unflagged choices complete at
once.  No ratings or agreement questions are collected.

``create_app`` wraps a service in a FastAPI application; bodies are
read as plain JSON so numeric strings stay exact end to end.
"""

import uuid
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Mapping

from .alerts import AlertContent, build_alert, render_alert_text
from .analytics import AwarenessReport, awareness_level, AwarenessRating, summarize_history
from .engine import Mode, RiskAssessment, assess
from .errors import AbiError
from .history import EventKind, EventLog, RatingPhase
from .model import (
    Choice,
    ChoicePhase,
    DecisionProblem,
    ProblemValidationError,
    UnknownAlternative,
    problem_to_dict,
    validate_problem,
)


class FlowMode(str, Enum):
    EXPERIMENT = "experiment"
    PRODUCTION = "production"


class SessionState(str, Enum):
    AWAITING_CHOICE = "awaiting_choice"
    AWAITING_PRE_RATINGS = "awaiting_pre_ratings"
    ALERTED = "alerted"
    AWAITING_AGREEMENT = "awaiting_agreement"
    AWAITING_POST_RATINGS = "awaiting_post_ratings"
    AWAITING_REVISION = "awaiting_revision"
    COMPLETED = "completed"


class ServiceError(AbiError):
    """An operation failure with an HTTP-ready status code."""

    def __init__(self, status: int, code: str, message: str, details: Any = None):
        self.status = status
        self.code = code
        self.details = details
        super().__init__(message)


def _not_found(message: str) -> ServiceError:
    return ServiceError(404, "NotFound", message)


def _conflict(message: str) -> ServiceError:
    return ServiceError(409, "Conflict", message)


def _bad_request(message: str, details: Any = None) -> ServiceError:
    return ServiceError(400, "ValidationFailed", message, details)


@dataclass
class Session:
    id: str
    agent_id: str
    problem_id: str
    flow: FlowMode
    state: SessionState = SessionState.AWAITING_CHOICE
    choice_id: str | None = None
    chosen_alternative_id: str | None = None
    assessment: RiskAssessment | None = None
    alert: AlertContent | None = None
    awareness_before: int | None = None
    awareness_after: int | None = None
    final_alternative_id: str | None = None
    revised_choice_id: str | None = None
    acknowledged: bool = False


def _default_id_factory() -> str:
    return uuid.uuid4().hex


class DecisionService:
    """Workflow engine over an EventLog; one instance per store."""

    def __init__(
        self,
        store: EventLog,
        flow: FlowMode | str = FlowMode.EXPERIMENT,
        mode: Mode | str = Mode.CANONICAL,
        id_factory: Callable[[], str] | None = None,
        locale: str = "en",
    ):
        self._log = store
        self._flow = FlowMode(flow)
        self._mode = Mode(mode)
        self._new_id = id_factory or _default_id_factory
        self._locale = locale
        self._problems: dict[str, DecisionProblem] = {}
        self._sessions: dict[str, Session] = {}
        self._pairs_taken: set[tuple[str, str]] = set()
        for event in store.events():
            if event.kind == EventKind.PROBLEM_CREATED:
                problem = validate_problem(event.payload["problem"])
                self._problems[problem.id] = problem
            elif event.kind == EventKind.CHOICE_MADE:
                choice = event.payload["choice"]
                self._pairs_taken.add((choice["agent_id"], choice["problem_id"]))

    @property
    def flow(self) -> FlowMode:
        return self._flow

    @property
    def store(self) -> EventLog:
        return self._log

    # -- problems -------------------------------------------------------

    def create_problem(self, raw: Mapping[str, Any]) -> DecisionProblem:
        try:
            problem = validate_problem(raw)
        except ProblemValidationError as exc:
            raise _bad_request(
                "problem failed validation",
                details={"issues": [i.to_json_dict() for i in exc.issues]},
            ) from exc
        if problem.id in self._problems:
            raise _conflict(f"problem {problem.id!r} already exists")
        self._log.append_event(
            EventKind.PROBLEM_CREATED, {"problem": problem_to_dict(problem)}
        )
        self._problems[problem.id] = problem
        return problem

    def get_problem(self, problem_id: str) -> DecisionProblem:
        problem = self._problems.get(problem_id)
        if problem is None:
            raise _not_found(f"unknown problem {problem_id!r}")
        return problem

    def list_problems(self) -> list[DecisionProblem]:
        return list(self._problems.values())

    # -- sessions ---------------------------------------------------------

    def create_session(self, agent_id: str, problem_id: str) -> Session:
        if not isinstance(agent_id, str) or not agent_id:
            raise _bad_request("agent_id must be a non-empty string")
        if problem_id not in self._problems:
            raise _not_found(f"unknown problem {problem_id!r}")
        key = (agent_id, problem_id)
        if key in self._pairs_taken:
            raise _conflict(f"agent {agent_id!r} already has a session for problem {problem_id!r}")
        session = Session(
            id=self._new_id(), agent_id=agent_id, problem_id=problem_id, flow=self._flow
        )
        self._sessions[session.id] = session
        self._pairs_taken.add(key)
        return session

    def get_session(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise _not_found(f"unknown session {session_id!r}")
        return session

    def _require_state(self, session: Session, *allowed: SessionState) -> None:
        if session.state not in allowed:
            raise _conflict(
                f"session {session.id!r} is in state {session.state.value!r}, "
                f"expected {' or '.join(s.value for s in allowed)}"
            )

    def _alert_payload(self, session: Session) -> dict[str, Any]:
        assert session.alert is not None
        rendered = render_alert_text(session.alert, self._locale)
        data = dict(rendered.data)
        data["text"] = rendered.text
        return data

    # -- flow steps -------------------------------------------------------

    def submit_choice(self, session_id: str, alternative_id: str) -> dict[str, Any]:
        session = self.get_session(session_id)
        if session.state == SessionState.AWAITING_REVISION:
            return self.submit_revision(session_id, alternative_id=alternative_id)
        self._require_state(session, SessionState.AWAITING_CHOICE)
        problem = self._problems[session.problem_id]
        try:
            problem.alternative(alternative_id)
        except UnknownAlternative as exc:
            raise _not_found(str(exc)) from exc

        choice_id = self._new_id()
        event = self._log.append_event(
            EventKind.CHOICE_MADE,
            {
                "choice": {
                    "id": choice_id,
                    "problem_id": problem.id,
                    "agent_id": session.agent_id,
                    "chosen_alternative_id": alternative_id,
                    "phase": ChoicePhase.INITIAL.value,
                },
                "session_id": session.id,
            },
        )
        choice = Choice(
            id=choice_id,
            problem_id=problem.id,
            agent_id=session.agent_id,
            chosen_alternative_id=alternative_id,
            phase=ChoicePhase.INITIAL,
            timestamp=event.ts,
        )
        assessment = assess(problem, choice, self._mode)
        self._log.append_event(
            EventKind.ASSESSMENT_ISSUED,
            {"assessment": assessment.to_json_dict(), "session_id": session.id},
        )
        session.choice_id = choice_id
        session.chosen_alternative_id = alternative_id
        session.final_alternative_id = alternative_id
        session.assessment = assessment
        if assessment.risk_seeking_for_losses:
            session.alert = build_alert(problem, choice, assessment)

        response: dict[str, Any] = {"choice_id": choice_id, "session_id": session.id}
        if self._flow is FlowMode.EXPERIMENT:
            # assessment stays hidden until the first rating round is in
            session.state = SessionState.AWAITING_PRE_RATINGS
        else:
            if assessment.risk_seeking_for_losses:
                session.state = SessionState.ALERTED
                response["assessment"] = assessment.to_json_dict()
                response["alert"] = self._alert_payload(session)
            else:
                session.state = SessionState.COMPLETED
                response["assessment"] = assessment.to_json_dict()
        response["state"] = session.state.value
        return response

    def _validate_ratings(self, problem: DecisionProblem, ratings: Any) -> dict[str, int]:
        if not isinstance(ratings, Mapping):
            raise _bad_request("ratings must be an object of alternative_id -> integer")
        expected = {alt.id for alt in problem.alternatives}
        if set(ratings.keys()) != expected:
            raise _bad_request(f"ratings must cover exactly the alternatives {sorted(expected)}")
        clean: dict[str, int] = {}
        for alt_id, value in ratings.items():
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 10:
                raise _bad_request(f"rating for {alt_id!r} must be an integer in [0, 10]")
            clean[alt_id] = value
        return clean

    def submit_ratings(self, session_id: str, ratings: Mapping[str, Any]) -> dict[str, Any]:
        session = self.get_session(session_id)
        if self._flow is FlowMode.PRODUCTION:
            raise _conflict("the production flow does not collect ratings")
        self._require_state(
            session, SessionState.AWAITING_PRE_RATINGS, SessionState.AWAITING_POST_RATINGS
        )
        problem = self._problems[session.problem_id]
        clean = self._validate_ratings(problem, ratings)
        pre = session.state == SessionState.AWAITING_PRE_RATINGS
        phase = RatingPhase.BEFORE_ALERT if pre else RatingPhase.AFTER_ALERT
        self._log.append_event(
            EventKind.RATINGS_RECORDED,
            {
                "rating": {"choice_id": session.choice_id, "phase": phase.value, "ratings": clean},
                "session_id": session.id,
            },
        )
        assert session.assessment is not None
        level = awareness_level(
            AwarenessRating(session.choice_id, phase, clean), session.assessment
        )
        response: dict[str, Any] = {"awareness_level": level, "session_id": session.id}
        if pre:
            session.awareness_before = level
            if session.assessment.risk_seeking_for_losses:
                session.state = SessionState.ALERTED
                response["alert"] = self._alert_payload(session)
            else:
                session.state = SessionState.COMPLETED
        else:
            session.awareness_after = level
            session.state = SessionState.AWAITING_REVISION
        response["state"] = session.state.value
        return response

    def acknowledge_alert(self, session_id: str) -> dict[str, Any]:
        session = self.get_session(session_id)
        self._require_state(session, SessionState.ALERTED)
        self._log.append_event(
            EventKind.ALERT_ACKNOWLEDGED,
            {"choice_id": session.choice_id, "session_id": session.id},
        )
        session.acknowledged = True
        if self._flow is FlowMode.EXPERIMENT:
            session.state = SessionState.AWAITING_AGREEMENT
        else:
            session.state = SessionState.AWAITING_REVISION
        return {"session_id": session.id, "state": session.state.value}

    def submit_agreement(self, session_id: str, q1: Any, q2: Any) -> dict[str, Any]:
        session = self.get_session(session_id)
        self._require_state(session, SessionState.AWAITING_AGREEMENT)
        for name, value in (("q1_bias_agreement", q1), ("q2_insight_agreement", q2)):
            if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= 5:
                raise _bad_request(f"{name} must be an integer in [1, 5]")
        self._log.append_event(
            EventKind.AGREEMENT_RECORDED,
            {
                "agreement": {
                    "choice_id": session.choice_id,
                    "q1_bias_agreement": q1,
                    "q2_insight_agreement": q2,
                },
                "session_id": session.id,
            },
        )
        session.state = SessionState.AWAITING_POST_RATINGS
        return {"session_id": session.id, "state": session.state.value}

    def submit_revision(
        self,
        session_id: str,
        alternative_id: str | None = None,
        confirm: bool = False,
    ) -> dict[str, Any]:
        session = self.get_session(session_id)
        self._require_state(session, SessionState.AWAITING_REVISION)
        if confirm and alternative_id is not None:
            raise _bad_request("pass either alternative_id or confirm, not both")
        if not confirm and alternative_id is None:
            raise _bad_request("pass alternative_id to revise or confirm to keep the choice")
        problem = self._problems[session.problem_id]
        if confirm:
            alternative_id = session.chosen_alternative_id
        else:
            try:
                problem.alternative(alternative_id)
            except UnknownAlternative as exc:
                raise _not_found(str(exc)) from exc
        confirmed = alternative_id == session.chosen_alternative_id

        revised_id = self._new_id()
        self._log.append_event(
            EventKind.CHOICE_REVISED,
            {
                "choice": {
                    "id": revised_id,
                    "problem_id": session.problem_id,
                    "agent_id": session.agent_id,
                    "chosen_alternative_id": alternative_id,
                    "phase": ChoicePhase.REVISED.value,
                },
                "initial_choice_id": session.choice_id,
                "confirmed": confirmed,
                "session_id": session.id,
            },
        )
        session.revised_choice_id = revised_id
        session.final_alternative_id = alternative_id
        session.state = SessionState.COMPLETED
        return {
            "session_id": session.id,
            "state": session.state.value,
            "final_alternative_id": alternative_id,
            "confirmed": confirmed,
        }

    # -- views and analytics ----------------------------------------------

    def session_view(self, session_id: str) -> dict[str, Any]:
        session = self.get_session(session_id)
        view: dict[str, Any] = {
            "session_id": session.id,
            "agent_id": session.agent_id,
            "problem_id": session.problem_id,
            "flow": session.flow.value,
            "state": session.state.value,
            "choice_id": session.choice_id,
            "chosen_alternative_id": session.chosen_alternative_id,
            "final_alternative_id": session.final_alternative_id,
            "acknowledged": session.acknowledged,
        }
        alert_visible = session.alert is not None and session.state in (
            SessionState.ALERTED,
            SessionState.AWAITING_AGREEMENT,
            SessionState.AWAITING_POST_RATINGS,
            SessionState.AWAITING_REVISION,
        )
        view["alert"] = self._alert_payload(session) if alert_visible else None
        return view

    def report(self) -> AwarenessReport:
        return summarize_history(self._log.events())

    def export(self) -> bytes:
        return self._log.export_jsonl()


# ---------------------------------------------------------------------------
# HTTP facade
# ---------------------------------------------------------------------------


def create_app(service: DecisionService):
    """Build the FastAPI application around a DecisionService."""
    from fastapi import FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse, Response

    app = FastAPI(title="decision bias service", docs_url="/docs")
    app.state.service = service
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request: Request, exc: ServiceError) -> JSONResponse:
        body: dict[str, Any] = {"error": {"code": exc.code, "message": str(exc)}}
        if exc.details is not None:
            body["error"]["details"] = exc.details
        return JSONResponse(status_code=exc.status, content=body)

    async def _json_body(request: Request) -> dict[str, Any]:
        try:
            body = await request.json()
        except Exception:
            raise _bad_request("request body must be a JSON object") from None
        if not isinstance(body, dict):
            raise _bad_request("request body must be a JSON object")
        return body

    @app.post("/api/problems", status_code=201)
    async def create_problem(request: Request):
        body = await _json_body(request)
        problem = service.create_problem(body)
        return {"problem_id": problem.id}

    @app.get("/api/problems")
    async def list_problems():
        return {"problems": [problem_to_dict(p) for p in service.list_problems()]}

    @app.get("/api/problems/{problem_id}")
    async def get_problem(problem_id: str):
        return problem_to_dict(service.get_problem(problem_id))

    @app.post("/api/sessions", status_code=201)
    async def create_session(request: Request):
        body = await _json_body(request)
        agent_id = body.get("agent_id")
        problem_id = body.get("problem_id")
        if not isinstance(problem_id, str) or not problem_id:
            raise _bad_request("problem_id must be a non-empty string")
        session = service.create_session(agent_id, problem_id)
        return {"session_id": session.id, "state": session.state.value, "flow": session.flow.value}

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str):
        return service.session_view(session_id)

    @app.post("/api/sessions/{session_id}/choice")
    async def submit_choice(session_id: str, request: Request):
        body = await _json_body(request)
        alternative_id = body.get("alternative_id")
        if not isinstance(alternative_id, str) or not alternative_id:
            raise _bad_request("alternative_id must be a non-empty string")
        return service.submit_choice(session_id, alternative_id)

    @app.post("/api/sessions/{session_id}/ratings")
    async def submit_ratings(session_id: str, request: Request):
        body = await _json_body(request)
        return service.submit_ratings(session_id, body.get("ratings"))

    @app.post("/api/sessions/{session_id}/acknowledge")
    async def acknowledge(session_id: str):
        return service.acknowledge_alert(session_id)

    @app.post("/api/sessions/{session_id}/agreement")
    async def submit_agreement(session_id: str, request: Request):
        body = await _json_body(request)
        q1 = body.get("q1_bias_agreement", body.get("q1"))
        q2 = body.get("q2_insight_agreement", body.get("q2"))
        return service.submit_agreement(session_id, q1, q2)

    @app.post("/api/sessions/{session_id}/revision")
    async def submit_revision(session_id: str, request: Request):
        body = await _json_body(request)
        alternative_id = body.get("alternative_id")
        confirm = body.get("confirm", False)
        if not isinstance(confirm, bool):
            raise _bad_request("confirm must be a boolean")
        if alternative_id is not None and (not isinstance(alternative_id, str) or not alternative_id):
            raise _bad_request("alternative_id must be a non-empty string")
        return service.submit_revision(session_id, alternative_id=alternative_id, confirm=confirm)

    @app.get("/api/analytics/report")
    async def analytics_report():
        return service.report().to_json_dict()

    @app.get("/api/history/export")
    async def history_export():
        return Response(content=service.export(), media_type="application/x-ndjson")

    return app
