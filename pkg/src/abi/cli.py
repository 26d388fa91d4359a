"""Command line interface.

Subcommands:
  serve      run the HTTP service over a file-backed event store
  classify   evaluate the risk-seeking rule on every problem in a file
  analyze    print the awareness report of an event store
  demo       run one scripted flagged session end to end, in memory

Exit codes: 0 on success, 1 on input validation errors, 2 on I/O or
store corruption.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Decimal
from typing import Any, Sequence

from .alerts import format_money
from .engine import Mode, is_risk_seeking_for_losses_choice
from .history import CorruptLog, EventLog, StorageError
from .model import (
    DecisionProblem,
    ProblemFileSyntaxError,
    ProblemFileValidationError,
    decimal_str,
    parse_problem_file,
)
from .service import DecisionService, FlowMode, SessionState
from .valuation import expected_value

STORE_ENV_VAR = "ABI_STORE"

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_IO_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abi",
        description="Detect, explain, and analyze risk-seeking choices over sure losses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument(
        "--store",
        default=None,
        help=f"event store path (falls back to ${STORE_ENV_VAR})",
    )
    serve.add_argument(
        "--flow",
        choices=[f.value for f in FlowMode],
        default=FlowMode.EXPERIMENT.value,
        help="experiment: ratings and agreement rounds; production: alert right after the choice",
    )
    serve.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CANONICAL.value)
    serve.add_argument("--ui-dir", default=None, help="serve a built UI from this directory at /")

    classify = sub.add_parser("classify", help="classify every problem in a JSON file")
    classify.add_argument("file", help="problem file (JSON)")
    classify.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CANONICAL.value)
    classify.add_argument("--json", action="store_true", dest="as_json")

    analyze = sub.add_parser("analyze", help="summarize an event store")
    analyze.add_argument(
        "store",
        nargs="?",
        default=None,
        help=f"event store path (falls back to ${STORE_ENV_VAR})",
    )
    analyze.add_argument("--json", action="store_true", dest="as_json")

    demo = sub.add_parser("demo", help="run a scripted flagged session in memory")
    demo.add_argument("--locale", default="en")
    return parser


def _resolve_store(path: str | None) -> str:
    resolved = path or os.environ.get(STORE_ENV_VAR)
    if not resolved:
        raise SystemExit(
            f"no store given: pass a path or set ${STORE_ENV_VAR} (exit {EXIT_INVALID_INPUT})"
        )
    return resolved


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def _classification_record(problem: DecisionProblem, mode: Mode) -> dict[str, Any]:
    record: dict[str, Any] = {
        "problem_id": problem.id,
        "currency": problem.currency,
        "expected_values": {},
        "classifications": [],
    }
    for alt in problem.alternatives:
        ev = expected_value(alt)
        record["expected_values"][alt.id] = decimal_str(ev.amount_minor)
    for alt in problem.alternatives:
        verdict, trace = is_risk_seeking_for_losses_choice(problem, alt.id, mode)
        record["classifications"].append(
            {
                "chosen_alternative_id": alt.id,
                "risk_seeking_for_losses": verdict,
                "trace": trace.to_json_dict(),
            }
        )
    return record


def _print_classification(record: dict[str, Any], problem: DecisionProblem) -> None:
    print(f"problem {record['problem_id']} [{record['currency']}]")
    for alt in problem.alternatives:
        ev_minor = Decimal(record["expected_values"][alt.id])
        rounded = int(ev_minor.to_integral_value(rounding="ROUND_HALF_EVEN"))
        print(
            f"  {alt.id}: "
            + " | ".join(
                f"{o.value.amount_minor} @ {decimal_str(o.probability.value)}%" for o in alt.outcomes
            )
            + f"  EV = {decimal_str(ev_minor)} ({format_money(rounded, record['currency'])})"
        )
    for item in record["classifications"]:
        verdict = "Yes" if item["risk_seeking_for_losses"] else "No"
        print(f"  chosen {item['chosen_alternative_id']}: risk seeking for losses: {verdict}")
        for entry in item["trace"]:
            operands = ", ".join(f"{k}={v}" for k, v in entry["operands"])
            print(f"    {entry['name']}({operands}) = {entry['result']}")
    print()


def _cmd_classify(args: argparse.Namespace) -> int:
    try:
        data = open(args.file, "rb").read()
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    try:
        problems = parse_problem_file(data)
    except ProblemFileSyntaxError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except ProblemFileValidationError as exc:
        for index, issues in sorted(exc.errors_by_index.items()):
            for issue in issues:
                print(f"{args.file}: problems[{index}] {issue.code} at {issue.path}: {issue.message}",
                      file=sys.stderr)
        return EXIT_INVALID_INPUT

    mode = Mode(args.mode)
    records = [_classification_record(p, mode) for p in problems]
    if args.as_json:
        print(json.dumps({"mode": mode.value, "problems": records}, indent=2))
    else:
        for record, problem in zip(records, problems):
            _print_classification(record, problem)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _cmd_analyze(args: argparse.Namespace) -> int:
    path = _resolve_store(args.store)
    if not os.path.exists(path):
        print(f"store not found: {path}", file=sys.stderr)
        return EXIT_IO_ERROR
    try:
        log = EventLog(path)
    except (CorruptLog, StorageError) as exc:
        print(f"cannot open store {path}: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    with log:
        from .analytics import summarize_history

        report = summarize_history(log.events())
        for warning in log.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        if args.as_json:
            print(json.dumps(report.to_json_dict(), indent=2))
            return EXIT_OK
        print(f"problems:            {report.n_problems}")
        print(f"initial choices:     {report.n_initial_choices}")
        print(f"flagged choices:     {report.n_flagged} ({report.flagged_fraction})")
        print(f"awareness pairs:     {list(report.awareness_pairs)}")
        if report.wilcoxon is not None:
            w = report.wilcoxon
            kind = "exact" if w.exact else "approximate"
            print(
                f"wilcoxon ({w.alternative}, {kind}): W+ = {w.statistic}, "
                f"p = {w.p_value}, n_eff = {w.n_effective}"
            )
        else:
            print("wilcoxon: not computable (no usable pairs)")
        print(f"q1 histogram (1..5): {list(report.q1_histogram.values())}")
        print(f"q2 histogram (1..5): {list(report.q2_histogram.values())}")
        print(f"q1 by improvement:   {[list(r) for r in report.q1_by_improvement]}")
        print(f"q2 by improvement:   {[list(r) for r in report.q2_by_improvement]}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------

DEMO_PROBLEM = {
    "id": "plant-closure",
    "statement": (
        "A factory must respond to a sudden drop in demand. Two restructuring plans "
        "are on the table and one must be picked now."
    ),
    "currency": "BRL",
    "alternatives": [
        {
            "id": "alt1",
            "label": "Close one line now",
            "outcomes": [{"amount_minor": -20_000_000, "probability_pct": "100"}],
        },
        {
            "id": "alt2",
            "label": "Keep both lines running",
            "outcomes": [
                {"amount_minor": -25_000_000, "probability_pct": "90"},
                {"amount_minor": 0, "probability_pct": "10"},
            ],
        },
    ],
}


def _cmd_demo(args: argparse.Namespace) -> int:
    log = EventLog()
    service = DecisionService(log, flow=FlowMode.EXPERIMENT, locale=args.locale)
    problem = service.create_problem(DEMO_PROBLEM)
    print(f"created problem {problem.id!r}")

    session = service.create_session("demo-agent", problem.id)
    print(f"opened session {session.id} (state {session.state.value})")

    step = service.submit_choice(session.id, "alt2")
    print(f"chose alt2 (state {step['state']}); assessment withheld")

    step = service.submit_ratings(session.id, {"alt1": 5, "alt2": 8})
    print(f"rated before alert: awareness level {step['awareness_level']} (state {step['state']})")
    alert = step.get("alert")
    if alert is not None:
        print()
        print(alert["text"])

    step = service.acknowledge_alert(session.id)
    print(f"acknowledged alert (state {step['state']})")

    step = service.submit_agreement(session.id, 4, 5)
    print(f"answered agreement questions (state {step['state']})")

    step = service.submit_ratings(session.id, {"alt1": 9, "alt2": 3})
    print(f"rated after alert: awareness level {step['awareness_level']} (state {step['state']})")

    step = service.submit_revision(session.id, alternative_id="alt1")
    print(f"revised to alt1 (state {step['state']})")

    report = service.report()
    print()
    print(f"report: flagged {report.n_flagged}/{report.n_initial_choices}, "
          f"awareness pairs {list(report.awareness_pairs)}")
    if session.state is not SessionState.COMPLETED:
        return EXIT_INVALID_INPUT
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    path = _resolve_store(args.store)
    try:
        log = EventLog(path)
    except (CorruptLog, StorageError) as exc:
        print(f"cannot open store {path}: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    for warning in log.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    service = DecisionService(log, flow=args.flow, mode=args.mode)
    app = create_app(service)
    if args.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui_dir, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "classify": _cmd_classify,
        "analyze": _cmd_analyze,
        "demo": _cmd_demo,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_INVALID_INPUT
        raise


if __name__ == "__main__":
    sys.exit(main())
