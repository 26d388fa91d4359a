"""Detection, explanation, and analytics for risk-seeking loss choices.

The package models binary decision problems under risk with exact
decimal arithmetic, applies an eight-predicate rule to spot choices of
a probable larger loss over a sure smaller one, renders two-part
explanatory alerts, and keeps an append-only event history with the
statistics needed to evaluate whether alerts change minds.
"""

from .alerts import (
    AlertContent,
    NotFlagged,
    RenderedAlert,
    build_alert,
    format_money,
    render_alert_text,
)
from .analytics import (
    AgreementResponse,
    AwarenessPair,
    AwarenessRating,
    AwarenessReport,
    MissingRating,
    awareness_level,
    summarize_history,
)
from .engine import (
    Mode,
    PredicateResult,
    PredicateTrace,
    RiskAssessment,
    assess,
    canonicalize,
    is_risk_seeking_for_losses_choice,
)
from .errors import AbiError, InvalidValue
from .history import (
    CorruptLog,
    EventKind,
    EventLog,
    HistoryEvent,
    RatingPhase,
    ReferentialError,
    RelationalSnapshot,
    SchemaError,
    StorageError,
    project_relational,
)
from .model import (
    Agent,
    Alternative,
    Choice,
    ChoicePhase,
    DecisionProblem,
    Money,
    Outcome,
    Probability,
    ProblemFileSyntaxError,
    ProblemFileValidationError,
    ProblemValidationError,
    UnknownAlternative,
    ValidationIssue,
    parse_problem_file,
    problem_to_dict,
    serialize_problems,
    validate_problem,
)
from .service import DecisionService, FlowMode, ServiceError, SessionState, create_app
from .stats import (
    AllZeroDifferences,
    DegenerateTable,
    EmptySample,
    TestResult,
    chi_square_independence,
    mann_whitney_u,
    wilcoxon_signed_rank,
)
from .valuation import (
    LOSS_DECISION_WEIGHTS,
    Domain,
    ExpectedValue,
    FourfoldCell,
    FourfoldEffect,
    OutOfTableRange,
    ProbabilityBand,
    RiskPreference,
    UnsupportedShape,
    classify_alternative_domain,
    classify_risk_context,
    decision_weight_for_loss,
    expected_value,
    sure_alternative_index,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
