"""Two-part explanations for flagged risk-seeking-for-losses choices.

Part 1 restates the problem and the selection in plain outcome-by-
outcome wording.  Part 2 explains the mechanics behind the pattern:
the sure loss versus the high-probability larger loss, loss aversion,
the reference point the gamble invites, and the decision weight the
stated loss probability typically carries.

``AlertContent`` holds structured values copied verbatim from the
problem and assessment (this module performs no arithmetic of its own
beyond the weight-table lookup).  ``render_alert_text`` turns content
into deterministic human-readable text plus a JSON-ready dict; unknown
locales fall back to the default with a warning flag instead of
failing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Mapping

from .engine import RiskAssessment, canonicalize, slot_view_canonical
from .errors import AbiError
from .model import Choice, DecisionProblem, decimal_str
from .valuation import LOSS_DECISION_WEIGHTS, decision_weight_for_loss

DEFAULT_LOCALE = "en"

SURE_LOSS_TAG = "High loss for sure"
GAMBLE_LOSS_TAG = "High probability of higher loss"


class NotFlagged(AbiError):
    """Alerts exist only for assessments that flagged the choice."""


# ---------------------------------------------------------------------------
# content
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeRestatement:
    """One outcome as shown to the agent: amount and probability."""

    amount_minor: int
    probability_pct: Decimal


@dataclass(frozen=True)
class AlternativeSummary:
    alternative_id: str
    label: str
    outcomes: tuple[OutcomeRestatement, ...]


@dataclass(frozen=True)
class SureLossSummary:
    alternative_id: str
    amount_minor: int
    probability_pct: Decimal
    tag: str = SURE_LOSS_TAG


@dataclass(frozen=True)
class GambleLossSummary:
    alternative_id: str
    principal_amount_minor: int
    principal_probability_pct: Decimal
    secondary_amount_minor: int
    secondary_probability_pct: Decimal
    tag: str = GAMBLE_LOSS_TAG


@dataclass(frozen=True)
class DecisionWeightRow:
    """The weight attached to the gamble's stated loss probability."""

    probability_pct: Decimal
    weight: Decimal
    table: tuple[tuple[Decimal, Decimal], ...] = LOSS_DECISION_WEIGHTS


@dataclass(frozen=True)
class AlertPart1:
    problem_statement: str
    chosen_alternative_id: str
    alternatives: tuple[AlternativeSummary, ...]


@dataclass(frozen=True)
class AlertPart2:
    currency: str
    sure_summary: SureLossSummary
    gamble_summary: GambleLossSummary
    reference_point_amount_minor: int
    weight_row: DecisionWeightRow


@dataclass(frozen=True)
class AlertContent:
    part1: AlertPart1
    part2: AlertPart2

    def to_json_dict(self, locale: str = DEFAULT_LOCALE) -> dict[str, Any]:
        return render_alert_text(self, locale).data


def build_alert(problem: DecisionProblem, choice: Choice, assessment: RiskAssessment) -> AlertContent:
    """Assemble alert content for a flagged choice.

    Raises NotFlagged when the assessment did not flag the choice.
    Every numeric field is copied from the problem; the only lookup is
    the decision weight for the gamble's principal probability.
    """
    if not assessment.risk_seeking_for_losses:
        raise NotFlagged(f"choice {choice.id!r} was not flagged as risk seeking for losses")
    if assessment.problem_id != problem.id or assessment.choice_id != choice.id:
        raise NotFlagged("assessment does not belong to this problem and choice")
    layout = canonicalize(problem, choice.chosen_alternative_id)
    if layout is None:
        raise NotFlagged("flagged problem lost its sure-versus-gamble shape")

    summaries = tuple(
        AlternativeSummary(
            alt.id,
            alt.label,
            tuple(OutcomeRestatement(o.value.amount_minor, o.probability.value) for o in alt.outcomes),
        )
        for alt in problem.alternatives
    )
    sure_slots = slot_view_canonical(layout.sure)
    gamble_slots = slot_view_canonical(layout.gamble)
    reference_amount = max(o.value.amount_minor for o in layout.gamble.effective_outcomes())
    return AlertContent(
        part1=AlertPart1(
            problem_statement=problem.statement,
            chosen_alternative_id=choice.chosen_alternative_id,
            alternatives=summaries,
        ),
        part2=AlertPart2(
            currency=problem.currency,
            sure_summary=SureLossSummary(
                alternative_id=layout.sure.id,
                amount_minor=sure_slots.a_value,
                probability_pct=sure_slots.a_probability,
            ),
            gamble_summary=GambleLossSummary(
                alternative_id=layout.gamble.id,
                principal_amount_minor=gamble_slots.a_value,
                principal_probability_pct=gamble_slots.a_probability,
                secondary_amount_minor=gamble_slots.b_value,
                secondary_probability_pct=gamble_slots.b_probability,
            ),
            reference_point_amount_minor=reference_amount,
            weight_row=DecisionWeightRow(
                probability_pct=gamble_slots.a_probability,
                weight=decision_weight_for_loss(gamble_slots.a_probability),
            ),
        ),
    )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_CURRENCY_SYMBOLS = {"USD": "$", "BRL": "R$", "EUR": "€", "GBP": "£"}


@dataclass(frozen=True)
class _Locale:
    code: str
    thousands_sep: str
    decimal_sep: str
    strings: Mapping[str, str] = field(repr=False, default_factory=dict)


_EN = _Locale(
    code="en",
    thousands_sep=",",
    decimal_sep=".",
    strings={
        "title": "RISK ALERT: your selection matches a known bias pattern",
        "purpose": (
            "Before your choice is final, this alert walks through why choosing a gamble "
            "over a sure alternative, when both mean losing, tends to follow a risk-seeking "
            "pattern rather than a money calculation. You remain free to keep your selection."
        ),
        "refers_to": 'It refers to your selection of alternative "{chosen}" in this problem:',
        "alternative_heading": "Alternative {id} ({label}):",
        "in_other_words": "In other words: {restatement}.",
        "losing": "{p}% chance of losing {money}",
        "losing_nothing": "{p}% chance of losing nothing",
        "winning": "{p}% chance of winning {money}",
        "join": " AND a ",
        "lead": "a ",
        "why_heading": "WHY THIS PATTERN IS WORTH A SECOND LOOK",
        "summary_line": "Alternative {id} [{tag}]: {body}",
        "loss_aversion": (
            "Losses weigh more than gains of the same size. That extra weight can make a "
            "sure loss feel worse than a gamble for an even larger loss, pulling the "
            "selection away from the amounts themselves."
        ),
        "reference_zero": (
            "The gamble keeps open the hope of LOSING NOTHING, and that hope becomes the "
            "reference point. Judged from there, the sure alternative reads as a guaranteed "
            "loss, which makes the gamble look better than its own numbers."
        ),
        "reference_nonzero": (
            "The best the gamble can do is a loss of {money}, and that best case becomes "
            "the reference point. Judged from there, the sure alternative reads as a "
            "guaranteed loss, which makes the gamble look better than its own numbers."
        ),
        "weights_heading": "HOW PEOPLE TYPICALLY WEIGH STATED LOSS PROBABILITIES",
        "weights_columns": "stated probability (%) -> decision weight",
        "weights_note": (
            "A stated {p}% chance of losing typically acts on the decision with a weight "
            "of about {w}, so a high chance of a larger loss feels less threatening than "
            "it should."
        ),
        "tag_sure": SURE_LOSS_TAG,
        "tag_gamble": GAMBLE_LOSS_TAG,
    },
)

_PT_BR = _Locale(
    code="pt-BR",
    thousands_sep=".",
    decimal_sep=",",
    strings={
        "title": "ALERTA DE RISCO: sua escolha corresponde a um padrão conhecido de viés",
        "purpose": (
            "Antes de concluir, este alerta explica por que escolher uma aposta em vez de "
            "uma alternativa certa, quando ambas significam perder, tende a seguir um "
            "padrão de busca de risco e não um cálculo financeiro. Você "
            "pode manter sua escolha."
        ),
        "refers_to": 'Refere-se à sua escolha da alternativa "{chosen}" neste problema:',
        "alternative_heading": "Alternativa {id} ({label}):",
        "in_other_words": "Em outras palavras: {restatement}.",
        "losing": "{p}% de chance de perder {money}",
        "losing_nothing": "{p}% de chance de não perder nada",
        "winning": "{p}% de chance de ganhar {money}",
        "join": " E ",
        "lead": "",
        "why_heading": "POR QUE VALE REVER ESTE PADRÃO",
        "summary_line": "Alternativa {id} [{tag}]: {body}",
        "loss_aversion": (
            "Perdas pesam mais do que ganhos do mesmo tamanho. Esse peso extra pode fazer "
            "uma perda certa parecer pior do que uma aposta por uma perda ainda maior, "
            "afastando a escolha dos próprios valores."
        ),
        "reference_zero": (
            "A aposta mantém viva a esperança de NÃO PERDER NADA, e essa "
            "esperança vira o ponto de referência. Vista dali, a alternativa "
            "certa parece uma perda garantida, o que faz a aposta parecer melhor do que "
            "seus próprios números."
        ),
        "reference_nonzero": (
            "O melhor caso da aposta é uma perda de {money}, e esse melhor caso vira "
            "o ponto de referência. Vista dali, a alternativa certa parece uma perda "
            "garantida, o que faz a aposta parecer melhor do que seus próprios "
            "números."
        ),
        "weights_heading": "COMO AS PESSOAS COSTUMAM PESAR PROBABILIDADES DE PERDA",
        "weights_columns": "probabilidade declarada (%) -> peso de decisão",
        "weights_note": (
            "Uma chance declarada de {p}% de perder costuma agir na decisão com peso "
            "próximo de {w}, então uma chance alta de perda maior assusta menos "
            "do que deveria."
        ),
        "tag_sure": "Perda alta garantida",
        "tag_gamble": "Alta probabilidade de perda maior",
    },
)

LOCALES: dict[str, _Locale] = {"en": _EN, "pt-BR": _PT_BR}


def format_money(amount_minor: int, currency: str, locale: str = DEFAULT_LOCALE) -> str:
    """Format minor units for humans, e.g. -2500000 BRL -> "-R$ 25.000,00"."""
    loc = LOCALES.get(locale, _EN)
    sign = "-" if amount_minor < 0 else ""
    units, cents = divmod(abs(amount_minor), 100)
    grouped = f"{units:,}".replace(",", loc.thousands_sep)
    symbol = _CURRENCY_SYMBOLS.get(currency, currency)
    return f"{sign}{symbol} {grouped}{loc.decimal_sep}{cents:02d}"


def _format_pct(value: Decimal, loc: _Locale) -> str:
    return decimal_str(value).replace(".", loc.decimal_sep)


def _outcome_phrase(amount_minor: int, probability: Decimal, currency: str, loc: _Locale) -> str:
    p = _format_pct(probability, loc)
    if amount_minor < 0:
        money = format_money(-amount_minor, currency, loc.code)
        return loc.strings["losing"].format(p=p, money=money)
    if amount_minor == 0:
        return loc.strings["losing_nothing"].format(p=p)
    money = format_money(amount_minor, currency, loc.code)
    return loc.strings["winning"].format(p=p, money=money)


def _phrase_list(phrases: list[str], loc: _Locale) -> str:
    return loc.strings["lead"] + loc.strings["join"].join(phrases)


def _restate(summary: AlternativeSummary, currency: str, loc: _Locale) -> str:
    phrases = [_outcome_phrase(o.amount_minor, o.probability_pct, currency, loc) for o in summary.outcomes]
    return _phrase_list(phrases, loc)


@dataclass(frozen=True)
class RenderedAlert:
    text: str
    data: dict[str, Any]
    locale_requested: str
    locale_used: str
    warnings: tuple[str, ...] = ()


def render_alert_text(content: AlertContent, locale: str = DEFAULT_LOCALE) -> RenderedAlert:
    """Render alert content to deterministic text plus its JSON form."""
    warnings: tuple[str, ...] = ()
    loc = LOCALES.get(locale)
    if loc is None:
        warnings = (f"unsupported locale {locale!r}; rendered with {DEFAULT_LOCALE!r}",)
        loc = LOCALES[DEFAULT_LOCALE]

    p1, p2 = content.part1, content.part2
    currency = p2.currency
    s = loc.strings

    restatements = {a.alternative_id: _restate(a, currency, loc) for a in p1.alternatives}
    sure_body = _phrase_list(
        [_outcome_phrase(p2.sure_summary.amount_minor, p2.sure_summary.probability_pct, currency, loc)],
        loc,
    )
    gamble_body = _phrase_list(
        [
            _outcome_phrase(
                p2.gamble_summary.principal_amount_minor,
                p2.gamble_summary.principal_probability_pct,
                currency,
                loc,
            ),
            _outcome_phrase(
                p2.gamble_summary.secondary_amount_minor,
                p2.gamble_summary.secondary_probability_pct,
                currency,
                loc,
            ),
        ],
        loc,
    )
    if p2.reference_point_amount_minor == 0:
        reference_statement = s["reference_zero"]
    else:
        reference_statement = s["reference_nonzero"].format(
            money=format_money(abs(p2.reference_point_amount_minor), currency, loc.code)
        )
    weight_note = s["weights_note"].format(
        p=_format_pct(p2.weight_row.probability_pct, loc),
        w=_format_pct(p2.weight_row.weight, loc),
    )

    bar = "=" * 72
    lines: list[str] = [bar, s["title"], bar, "", s["purpose"], ""]
    lines.append(s["refers_to"].format(chosen=p1.chosen_alternative_id))
    lines.append("")
    lines.append(f"    {p1.problem_statement}")
    lines.append("")
    for summary in p1.alternatives:
        lines.append(s["alternative_heading"].format(id=summary.alternative_id, label=summary.label))
        lines.append("    " + s["in_other_words"].format(restatement=restatements[summary.alternative_id]))
    lines.append("")
    lines.append(s["why_heading"])
    lines.append("-" * len(s["why_heading"]))
    lines.append(
        s["summary_line"].format(id=p2.sure_summary.alternative_id, tag=s["tag_sure"], body=sure_body)
    )
    lines.append(
        s["summary_line"].format(id=p2.gamble_summary.alternative_id, tag=s["tag_gamble"], body=gamble_body)
    )
    lines.append("")
    lines.append(s["loss_aversion"])
    lines.append("")
    lines.append(reference_statement)
    lines.append("")
    lines.append(s["weights_heading"])
    lines.append("    " + s["weights_columns"])
    highlighted = p2.weight_row.probability_pct
    prob_cells = []
    weight_cells = []
    for anchor_p, anchor_w in p2.weight_row.table:
        p_text = _format_pct(anchor_p, loc)
        w_text = _format_pct(anchor_w, loc)
        if anchor_p == highlighted:
            p_text = f"[{p_text}]"
            w_text = f"[{w_text}]"
        prob_cells.append(p_text.rjust(7))
        weight_cells.append(w_text.rjust(7))
    lines.append("    " + "".join(prob_cells))
    lines.append("    " + "".join(weight_cells))
    lines.append("    " + weight_note)
    text = "\n".join(lines) + "\n"

    data = {
        "part1": {
            "purpose": s["purpose"],
            "problem_statement": p1.problem_statement,
            "chosen_alternative_id": p1.chosen_alternative_id,
            "alternatives": [
                {
                    "alternative_id": a.alternative_id,
                    "label": a.label,
                    "restatement": restatements[a.alternative_id],
                    "outcomes": [
                        {"amount_minor": o.amount_minor, "probability_pct": decimal_str(o.probability_pct)}
                        for o in a.outcomes
                    ],
                }
                for a in p1.alternatives
            ],
        },
        "part2": {
            "currency": currency,
            "sure_summary": {
                "alternative_id": p2.sure_summary.alternative_id,
                "amount_minor": p2.sure_summary.amount_minor,
                "probability_pct": decimal_str(p2.sure_summary.probability_pct),
                "tag": p2.sure_summary.tag,
                "text": sure_body,
            },
            "gamble_summary": {
                "alternative_id": p2.gamble_summary.alternative_id,
                "principal_amount_minor": p2.gamble_summary.principal_amount_minor,
                "principal_probability_pct": decimal_str(p2.gamble_summary.principal_probability_pct),
                "secondary_amount_minor": p2.gamble_summary.secondary_amount_minor,
                "secondary_probability_pct": decimal_str(p2.gamble_summary.secondary_probability_pct),
                "tag": p2.gamble_summary.tag,
                "text": gamble_body,
            },
            "loss_aversion_statement": s["loss_aversion"],
            "reference_point_statement": reference_statement,
            "reference_point_amount_minor": p2.reference_point_amount_minor,
            "decision_weight_table": [
                [decimal_str(p), decimal_str(w)] for p, w in p2.weight_row.table
            ],
            "highlighted_probability": decimal_str(p2.weight_row.probability_pct),
            "highlighted_weight": decimal_str(p2.weight_row.weight),
        },
    }
    return RenderedAlert(
        text=text,
        data=data,
        locale_requested=locale,
        locale_used=loc.code,
        warnings=warnings,
    )
