import itertools
import json

import pytest
from fastapi.testclient import TestClient

from abi.history import EventLog
from abi.service import (
    DecisionService,
    FlowMode,
    ServiceError,
    SessionState,
    create_app,
)
from conftest import FIXED_TS, RESTRUCTURE_RAW


def make_service(flow="experiment"):
    counter = itertools.count()
    log = EventLog(clock=lambda: FIXED_TS)
    return DecisionService(
        log, flow=flow, id_factory=lambda: f"id-{next(counter):03d}"
    )


def started_session(service, chosen="alt2", agent="agent-1"):
    service.create_problem(RESTRUCTURE_RAW)
    session = service.create_session(agent, "restructure")
    response = service.submit_choice(session.id, chosen)
    return session, response


def expect_error(callable_, status, code=None):
    with pytest.raises(ServiceError) as excinfo:
        callable_()
    assert excinfo.value.status == status
    if code is not None:
        assert excinfo.value.code == code
    return excinfo.value


class TestProblems:
    def test_create_get_list(self):
        service = make_service()
        problem = service.create_problem(RESTRUCTURE_RAW)
        assert problem.id == "restructure"
        assert service.get_problem("restructure") is problem
        assert service.list_problems() == [problem]

    def test_invalid_problem_reports_issues(self):
        service = make_service()
        bad = json.loads(json.dumps(RESTRUCTURE_RAW))
        bad["alternatives"][1]["outcomes"][0]["probability_pct"] = "80"
        error = expect_error(lambda: service.create_problem(bad), 400, "ValidationFailed")
        issues = error.details["issues"]
        assert any(issue["code"] == "ProbabilitySumError" for issue in issues)

    def test_duplicate_problem_conflicts(self):
        service = make_service()
        service.create_problem(RESTRUCTURE_RAW)
        expect_error(lambda: service.create_problem(RESTRUCTURE_RAW), 409, "Conflict")

    def test_unknown_problem_is_not_found(self):
        service = make_service()
        expect_error(lambda: service.get_problem("ghost"), 404, "NotFound")

    def test_replay_restores_problems_and_taken_pairs(self):
        service = make_service()
        started_session(service)
        rebuilt = DecisionService(service.store)
        assert [p.id for p in rebuilt.list_problems()] == ["restructure"]
        expect_error(lambda: rebuilt.create_session("agent-1", "restructure"), 409)
        assert rebuilt.create_session("agent-2", "restructure").state is SessionState.AWAITING_CHOICE


class TestSessions:
    def test_create_session_validations(self):
        service = make_service()
        service.create_problem(RESTRUCTURE_RAW)
        expect_error(lambda: service.create_session("", "restructure"), 400)
        expect_error(lambda: service.create_session(None, "restructure"), 400)
        expect_error(lambda: service.create_session("agent-1", "ghost"), 404)
        session = service.create_session("agent-1", "restructure")
        assert session.state is SessionState.AWAITING_CHOICE
        expect_error(lambda: service.create_session("agent-1", "restructure"), 409)
        assert service.get_session(session.id) is session
        expect_error(lambda: service.get_session("ghost"), 404)


class TestExperimentFlow:
    def test_choice_withholds_the_assessment(self):
        service = make_service()
        session, response = started_session(service)
        assert response == {
            "choice_id": "id-001",
            "session_id": session.id,
            "state": "awaiting_pre_ratings",
        }
        assert "assessment" not in response and "alert" not in response
        view = service.session_view(session.id)
        assert view["alert"] is None
        assert view["state"] == "awaiting_pre_ratings"

    def test_flagged_walkthrough(self):
        service = make_service()
        session, _ = started_session(service)

        pre = service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        assert pre["awareness_level"] == 0
        assert pre["state"] == "alerted"
        alert = pre["alert"]
        assert "LOSING NOTHING" in alert["text"]
        assert alert["part2"]["highlighted_probability"] == "90"
        assert alert["part2"]["highlighted_weight"] == "77.5"

        assert service.session_view(session.id)["alert"] is not None

        acked = service.acknowledge_alert(session.id)
        assert acked["state"] == "awaiting_agreement"
        assert service.get_session(session.id).acknowledged is True

        agreed = service.submit_agreement(session.id, 4, 5)
        assert agreed["state"] == "awaiting_post_ratings"

        post = service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
        assert post["awareness_level"] == 1
        assert post["state"] == "awaiting_revision"
        assert "alert" not in post

        revised = service.submit_revision(session.id, alternative_id="alt1")
        assert revised == {
            "session_id": session.id,
            "state": "completed",
            "final_alternative_id": "alt1",
            "confirmed": False,
        }

        kinds = [e.kind.value for e in service.store.events()]
        assert kinds == [
            "ProblemCreated",
            "ChoiceMade",
            "AssessmentIssued",
            "RatingsRecorded",
            "AlertAcknowledged",
            "AgreementRecorded",
            "RatingsRecorded",
            "ChoiceRevised",
        ]

    def test_unflagged_sessions_complete_after_the_first_ratings(self):
        service = make_service()
        session, _ = started_session(service, chosen="alt1")
        response = service.submit_ratings(session.id, {"alt1": 9, "alt2": 2})
        assert response["state"] == "completed"
        assert response["awareness_level"] == 1
        assert "alert" not in response
        assert service.session_view(session.id)["alert"] is None

    def test_choice_endpoint_delegates_to_revision_when_due(self):
        service = make_service()
        session, _ = started_session(service)
        service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        service.acknowledge_alert(session.id)
        service.submit_agreement(session.id, 3, 3)
        service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
        response = service.submit_choice(session.id, "alt1")
        assert response["state"] == "completed"
        assert response["final_alternative_id"] == "alt1"
        assert response["confirmed"] is False

    def test_confirming_keeps_the_original_choice(self):
        service = make_service()
        session, _ = started_session(service)
        service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        service.acknowledge_alert(session.id)
        service.submit_agreement(session.id, 3, 3)
        service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
        response = service.submit_revision(session.id, confirm=True)
        assert response["final_alternative_id"] == "alt2"
        assert response["confirmed"] is True

    def test_revising_to_the_same_alternative_counts_as_confirmed(self):
        service = make_service()
        session, _ = started_session(service)
        service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        service.acknowledge_alert(session.id)
        service.submit_agreement(session.id, 3, 3)
        service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
        response = service.submit_revision(session.id, alternative_id="alt2")
        assert response["confirmed"] is True


class TestStateConflicts:
    def test_steps_out_of_order_conflict(self):
        service = make_service()
        service.create_problem(RESTRUCTURE_RAW)
        session = service.create_session("agent-1", "restructure")
        expect_error(lambda: service.submit_ratings(session.id, {"alt1": 1, "alt2": 1}), 409)
        expect_error(lambda: service.acknowledge_alert(session.id), 409)
        expect_error(lambda: service.submit_agreement(session.id, 3, 3), 409)
        expect_error(lambda: service.submit_revision(session.id, confirm=True), 409)

        service.submit_choice(session.id, "alt2")
        expect_error(lambda: service.submit_choice(session.id, "alt2"), 409)
        expect_error(lambda: service.acknowledge_alert(session.id), 409)

        service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        expect_error(lambda: service.submit_agreement(session.id, 3, 3), 409)
        service.acknowledge_alert(session.id)
        expect_error(lambda: service.acknowledge_alert(session.id), 409)
        expect_error(lambda: service.submit_revision(session.id, confirm=True), 409)
        service.submit_agreement(session.id, 3, 3)
        service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
        service.submit_revision(session.id, confirm=True)
        expect_error(lambda: service.submit_choice(session.id, "alt1"), 409)
        expect_error(lambda: service.submit_revision(session.id, confirm=True), 409)

    def test_choice_and_revision_argument_validation(self):
        service = make_service()
        session, _ = started_session(service)
        expect_error(lambda: service.submit_choice("ghost", "alt1"), 404)
        service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        service.acknowledge_alert(session.id)
        service.submit_agreement(session.id, 3, 3)
        service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
        expect_error(lambda: service.submit_revision(session.id), 400)
        expect_error(
            lambda: service.submit_revision(session.id, alternative_id="alt1", confirm=True), 400
        )
        expect_error(lambda: service.submit_revision(session.id, alternative_id="alt9"), 404)

    def test_unknown_alternative_is_not_found(self):
        service = make_service()
        service.create_problem(RESTRUCTURE_RAW)
        session = service.create_session("agent-1", "restructure")
        expect_error(lambda: service.submit_choice(session.id, "alt9"), 404)
        assert service.get_session(session.id).state is SessionState.AWAITING_CHOICE

    def test_rating_validation(self):
        service = make_service()
        session, _ = started_session(service)
        for bad in (
            None,
            {"alt1": 5},
            {"alt1": 5, "alt2": 5, "alt3": 5},
            {"alt1": 5, "alt2": 11},
            {"alt1": 5, "alt2": -1},
            {"alt1": 5, "alt2": True},
            {"alt1": 5, "alt2": 4.5},
        ):
            expect_error(lambda b=bad: service.submit_ratings(session.id, b), 400)

    def test_agreement_validation(self):
        service = make_service()
        session, _ = started_session(service)
        service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
        service.acknowledge_alert(session.id)
        for q1, q2 in ((0, 3), (3, 6), (True, 3), (None, 3), (3, "4")):
            expect_error(lambda a=q1, b=q2: service.submit_agreement(session.id, a, b), 400)


class TestProductionFlow:
    def test_flagged_choice_alerts_immediately(self):
        service = make_service(flow="production")
        session, response = started_session(service)
        assert response["state"] == "alerted"
        assert response["assessment"]["risk_seeking_for_losses"] is True
        assert "text" in response["alert"]

        expect_error(lambda: service.submit_ratings(session.id, {"alt1": 1, "alt2": 1}), 409)

        acked = service.acknowledge_alert(session.id)
        assert acked["state"] == "awaiting_revision"
        revised = service.submit_revision(session.id, confirm=True)
        assert revised["state"] == "completed"
        assert revised["confirmed"] is True
        kinds = [e.kind.value for e in service.store.events()]
        assert kinds == [
            "ProblemCreated",
            "ChoiceMade",
            "AssessmentIssued",
            "AlertAcknowledged",
            "ChoiceRevised",
        ]

    def test_unflagged_choice_completes_at_once(self):
        service = make_service(flow="production")
        session, response = started_session(service, chosen="alt1")
        assert response["state"] == "completed"
        assert response["assessment"]["risk_seeking_for_losses"] is False
        assert "alert" not in response

    def test_flow_accepts_enum_and_string(self):
        assert make_service(flow=FlowMode.PRODUCTION).flow is FlowMode.PRODUCTION
        assert make_service(flow="experiment").flow is FlowMode.EXPERIMENT


class TestHttpApi:
    @pytest.fixture()
    def client(self):
        return TestClient(create_app(make_service()))

    def test_problem_endpoints(self, client):
        created = client.post("/api/problems", json=RESTRUCTURE_RAW)
        assert created.status_code == 201
        assert created.json() == {"problem_id": "restructure"}

        listed = client.get("/api/problems")
        assert listed.status_code == 200
        assert [p["id"] for p in listed.json()["problems"]] == ["restructure"]

        single = client.get("/api/problems/restructure")
        assert single.status_code == 200
        assert single.json() == RESTRUCTURE_RAW

        missing = client.get("/api/problems/ghost")
        assert missing.status_code == 404
        assert missing.json()["error"]["code"] == "NotFound"

        duplicate = client.post("/api/problems", json=RESTRUCTURE_RAW)
        assert duplicate.status_code == 409

        bad = json.loads(json.dumps(RESTRUCTURE_RAW))
        bad["id"] = "other"
        bad["alternatives"][0]["outcomes"][0]["probability_pct"] = "90"
        invalid = client.post("/api/problems", json=bad)
        assert invalid.status_code == 400
        body = invalid.json()["error"]
        assert body["code"] == "ValidationFailed"
        assert body["details"]["issues"]

    def test_body_must_be_a_json_object(self, client):
        assert client.post("/api/problems", json=[1, 2]).status_code == 400
        raw = client.post(
            "/api/problems", content=b"{not json", headers={"content-type": "application/json"}
        )
        assert raw.status_code == 400

    def test_session_creation_validation(self, client):
        client.post("/api/problems", json=RESTRUCTURE_RAW)
        assert client.post("/api/sessions", json={"agent_id": "a"}).status_code == 400
        assert (
            client.post("/api/sessions", json={"agent_id": "", "problem_id": "restructure"}).status_code
            == 400
        )
        assert (
            client.post("/api/sessions", json={"agent_id": "a", "problem_id": "ghost"}).status_code
            == 404
        )

    def test_full_experiment_walkthrough_over_http(self, client):
        client.post("/api/problems", json=RESTRUCTURE_RAW)
        created = client.post(
            "/api/sessions", json={"agent_id": "agent-1", "problem_id": "restructure"}
        )
        assert created.status_code == 201
        sid = created.json()["session_id"]
        assert created.json()["state"] == "awaiting_choice"
        assert created.json()["flow"] == "experiment"

        chosen = client.post(f"/api/sessions/{sid}/choice", json={"alternative_id": "alt2"})
        assert chosen.status_code == 200
        assert chosen.json()["state"] == "awaiting_pre_ratings"

        pre = client.post(
            f"/api/sessions/{sid}/ratings", json={"ratings": {"alt1": 5, "alt2": 8}}
        )
        assert pre.status_code == 200
        assert pre.json()["state"] == "alerted"
        assert pre.json()["awareness_level"] == 0
        assert "LOSING NOTHING" in pre.json()["alert"]["text"]

        view = client.get(f"/api/sessions/{sid}").json()
        assert view["state"] == "alerted"
        assert view["alert"]["part2"]["highlighted_weight"] == "77.5"

        assert client.post(f"/api/sessions/{sid}/acknowledge").json()["state"] == "awaiting_agreement"
        agreed = client.post(f"/api/sessions/{sid}/agreement", json={"q1": 4, "q2": 5})
        assert agreed.json()["state"] == "awaiting_post_ratings"

        post = client.post(
            f"/api/sessions/{sid}/ratings", json={"ratings": {"alt1": 9, "alt2": 3}}
        )
        assert post.json() == {
            "awareness_level": 1,
            "session_id": sid,
            "state": "awaiting_revision",
        }

        revised = client.post(f"/api/sessions/{sid}/revision", json={"alternative_id": "alt1"})
        assert revised.json()["state"] == "completed"
        assert revised.json()["confirmed"] is False

        report = client.get("/api/analytics/report").json()
        assert report["n_initial_choices"] == 1
        assert report["n_flagged"] == 1
        assert report["flagged_fraction"] == "1.000"
        assert [[p["before"], p["after"]] for p in report["awareness_pairs"]] == [[0, 1]]
        assert report["wilcoxon"]["p_value"] == "0.5"

    def test_agreement_accepts_long_keys(self, client):
        client.post("/api/problems", json=RESTRUCTURE_RAW)
        sid = client.post(
            "/api/sessions", json={"agent_id": "agent-1", "problem_id": "restructure"}
        ).json()["session_id"]
        client.post(f"/api/sessions/{sid}/choice", json={"alternative_id": "alt2"})
        client.post(f"/api/sessions/{sid}/ratings", json={"ratings": {"alt1": 5, "alt2": 8}})
        client.post(f"/api/sessions/{sid}/acknowledge")
        response = client.post(
            f"/api/sessions/{sid}/agreement",
            json={"q1_bias_agreement": 2, "q2_insight_agreement": 4},
        )
        assert response.status_code == 200
        assert response.json()["state"] == "awaiting_post_ratings"

    def test_revision_body_validation(self, client):
        client.post("/api/problems", json=RESTRUCTURE_RAW)
        sid = client.post(
            "/api/sessions", json={"agent_id": "agent-1", "problem_id": "restructure"}
        ).json()["session_id"]
        assert (
            client.post(f"/api/sessions/{sid}/revision", json={"confirm": "yes"}).status_code == 400
        )
        assert (
            client.post(f"/api/sessions/{sid}/revision", json={"alternative_id": ""}).status_code
            == 400
        )

    def test_history_export_round_trips(self, client):
        client.post("/api/problems", json=RESTRUCTURE_RAW)
        sid = client.post(
            "/api/sessions", json={"agent_id": "agent-1", "problem_id": "restructure"}
        ).json()["session_id"]
        client.post(f"/api/sessions/{sid}/choice", json={"alternative_id": "alt1"})
        exported = client.get("/api/history/export")
        assert exported.status_code == 200
        assert exported.headers["content-type"].startswith("application/x-ndjson")
        data = exported.content
        assert data.count(b"\n") == 3  # problem, choice, assessment
        imported = EventLog.import_jsonl(data)
        assert imported.export_jsonl() == data

    def test_cors_preflight_is_open(self, client):
        response = client.options(
            "/api/problems",
            headers={
                "Origin": "http://localhost:5173",
                "Access-Control-Request-Method": "POST",
            },
        )
        assert response.headers["access-control-allow-origin"] == "*"
