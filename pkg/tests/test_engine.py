import random
from decimal import Decimal

import pytest

from abi.engine import (
    Mode,
    PREDICATE_NAMES,
    PredicateResult,
    PredicateTrace,
    assess,
    canonicalize,
    is_risk_seeking_for_losses_choice,
    slot_view_canonical,
    unbiased_best_alternative_id,
)
from abi.errors import InvalidValue
from abi.model import UnknownAlternative
from conftest import (
    BONUS_MIRROR,
    PENALTY,
    RESTRUCTURE,
    ev_fraction,
    make_alternative,
    make_choice,
    make_problem,
    random_problem,
)

# ---------------------------------------------------------------------------
# independent oracle: literal predicate-by-predicate evaluation
# ---------------------------------------------------------------------------


def oracle_slots_stored(outcomes):
    padded = list(outcomes) + [(0, 0)]
    return padded[0], padded[1]


def oracle_slots_principal_first(outcomes):
    if len(outcomes) == 1:
        return outcomes[0], (0, 0)
    candidates = [i for i, (a, p) in enumerate(outcomes) if p > 0 and a != 0]
    if not candidates:
        candidates = [i for i, (_a, p) in enumerate(outcomes) if p > 0]
    ranked = sorted(candidates, key=lambda i: (abs(outcomes[i][0]), outcomes[i][1], -i), reverse=True)
    first = ranked[0]
    return outcomes[first], outcomes[1 - first]


def oracle_canonical_arrangement(outcome_sets, chosen_index):
    """(option1 outcomes, option2 outcomes, chosen_is_second) per the
    sure-first, principal-first arrangement; stored order otherwise."""

    def effective(outs):
        return [o for o in outs if o[1] > 0]

    sureness = [len(effective(outs)) == 1 for outs in outcome_sets]
    if sureness.count(True) == 1:
        sure_index = sureness.index(True)
        gamble_index = 1 - sure_index
        return (
            oracle_slots_principal_first(outcome_sets[sure_index]),
            oracle_slots_principal_first(outcome_sets[gamble_index]),
            chosen_index == gamble_index,
        )
    return (
        oracle_slots_principal_first(outcome_sets[0]),
        oracle_slots_principal_first(outcome_sets[1]),
        chosen_index == 1,
    )


def oracle_predicates(option1_slots, option2_slots, chosen_is_second, outcome_sets):
    (a1, pa1), _ = option1_slots
    (a2, pa2), (b2, _pb2) = option2_slots
    ev1 = ev_fraction(outcome_sets[0])
    ev2 = ev_fraction(outcome_sets[1])
    return [
        chosen_is_second,
        pa1 == 100,
        a1 < 0,
        50 <= pa2 < 100,
        a2 < 0,
        b2 <= 0,
        abs(a2) > abs(a1),
        ev1 >= ev2,
    ]


def oracle_strict(outcome_sets, chosen_index):
    return oracle_predicates(
        oracle_slots_stored(outcome_sets[0]),
        oracle_slots_stored(outcome_sets[1]),
        chosen_index == 1,
        outcome_sets,
    )


def oracle_canonical(outcome_sets, chosen_index):
    slots1, slots2, chosen_is_second = oracle_canonical_arrangement(outcome_sets, chosen_index)
    # EVs must follow the rearranged options
    def effective(outs):
        return [o for o in outs if o[1] > 0]

    sureness = [len(effective(outs)) == 1 for outs in outcome_sets]
    if sureness.count(True) == 1 and sureness.index(True) == 1:
        outcome_sets = [outcome_sets[1], outcome_sets[0]]
    return oracle_predicates(slots1, slots2, chosen_is_second, outcome_sets)


def outcomes_of(problem):
    return [
        [(o.value.amount_minor, int(o.probability.value)) for o in alt.outcomes]
        for alt in problem.alternatives
    ]


# ---------------------------------------------------------------------------
# golden cases
# ---------------------------------------------------------------------------


class TestGoldenVerdicts:
    def test_gamble_over_tied_sure_loss_is_flagged(self):
        verdict, trace = is_risk_seeking_for_losses_choice(PENALTY, "a2")
        assert verdict is True
        assert trace.verdict is True

    def test_choosing_the_sure_loss_is_not_flagged(self):
        verdict, trace = is_risk_seeking_for_losses_choice(PENALTY, "a1")
        assert verdict is False
        # only the selection predicate fails; the shape still matches
        assert trace["chosen_is_gamble"].result is False
        assert all(e.result for e in trace.entries if e.name != "chosen_is_gamble")

    def test_restructuring_gamble_is_flagged(self):
        verdict, _ = is_risk_seeking_for_losses_choice(RESTRUCTURE, "alt2")
        assert verdict is True

    def test_gains_mirror_is_not_flagged(self):
        verdict, trace = is_risk_seeking_for_losses_choice(BONUS_MIRROR, "a2")
        assert verdict is False
        assert trace["isNegativeValue_a1"].result is False
        assert trace["isNegativeValue_a2"].result is False

    def test_strict_mode_agrees_on_already_canonical_layouts(self):
        for problem, chosen in [(PENALTY, "a2"), (PENALTY, "a1"), (RESTRUCTURE, "alt2")]:
            canonical, _ = is_risk_seeking_for_losses_choice(problem, chosen, Mode.CANONICAL)
            strict, _ = is_risk_seeking_for_losses_choice(problem, chosen, Mode.STRICT)
            assert canonical == strict


class TestTraceContract:
    def test_exactly_eight_entries_in_rule_order(self):
        _, trace = is_risk_seeking_for_losses_choice(PENALTY, "a2")
        assert tuple(e.name for e in trace.entries) == PREDICATE_NAMES

    def test_every_predicate_is_evaluated_even_after_a_failure(self):
        # first predicate already fails; the rest still carry operands
        _, trace = is_risk_seeking_for_losses_choice(PENALTY, "a1")
        assert len(trace.entries) == 8
        assert trace["isEV1GreaterEqualsEV2"].operands == (
            ("ev1_minor", "-950000"),
            ("ev2_minor", "-950000"),
        )

    def test_trace_rejects_wrong_predicate_sets(self):
        entries = tuple(
            PredicateResult(name, (), True) for name in PREDICATE_NAMES[:-1] + ("something_else",)
        )
        with pytest.raises(InvalidValue):
            PredicateTrace(entries)

    def test_operands_record_the_values_seen(self):
        _, trace = is_risk_seeking_for_losses_choice(RESTRUCTURE, "alt2")
        assert trace["isProbabilityHighAndLess100_a2"].operands == (("probability_a2", "90"),)
        assert trace["isAbsValuea2GreaterAbsValuea1"].operands == (
            ("financial_value_a2", "-25000000"),
            ("financial_value_a1", "-20000000"),
        )


class TestCanonicalization:
    def test_storage_order_does_not_matter_in_canonical_mode(self):
        swapped = make_problem(
            "swapped",
            [(-25_000_000, 90), (0, 10)],
            [(-20_000_000, 100)],
            currency="BRL",
            ids=("alt2", "alt1"),
        )
        verdict, _ = is_risk_seeking_for_losses_choice(swapped, "alt2", Mode.CANONICAL)
        assert verdict is True
        strict_verdict, _ = is_risk_seeking_for_losses_choice(swapped, "alt2", Mode.STRICT)
        assert strict_verdict is False

    def test_principal_outcome_order_does_not_matter_in_canonical_mode(self):
        shuffled = make_problem(
            "shuffled",
            [(-20_000_000, 100)],
            [(0, 10), (-25_000_000, 90)],
            currency="BRL",
            ids=("alt1", "alt2"),
        )
        verdict, _ = is_risk_seeking_for_losses_choice(shuffled, "alt2", Mode.CANONICAL)
        assert verdict is True

    def test_layout_for_sure_versus_gamble(self):
        layout = canonicalize(PENALTY, "a2")
        assert (layout.sure.id, layout.gamble.id, layout.chosen_is_gamble) == ("a1", "a2", True)

    def test_no_layout_when_shape_does_not_decompose(self):
        two_gambles = make_problem("g", [(-1, 50), (0, 50)], [(-2, 50), (0, 50)])
        assert canonicalize(two_gambles, "a1") is None
        two_sure = make_problem("s", [(-1, 100)], [(-2, 100)])
        assert canonicalize(two_sure, "a1") is None

    def test_unknown_alternative_is_rejected(self):
        with pytest.raises(UnknownAlternative):
            canonicalize(PENALTY, "missing")
        with pytest.raises(UnknownAlternative):
            is_risk_seeking_for_losses_choice(PENALTY, "missing")

    def test_slot_view_pads_missing_branch_with_impossible_zero(self):
        view = slot_view_canonical(make_alternative("x", [(-7, 100)]))
        assert (view.b_value, view.b_probability) == (0, Decimal(0))


class TestUnbiasedBest:
    def test_higher_ev_wins(self):
        assert unbiased_best_alternative_id(RESTRUCTURE) == "alt1"
        better_gamble = make_problem("bg", [(-100, 100)], [(-50, 50), (0, 50)])
        assert unbiased_best_alternative_id(better_gamble) == "a2"

    def test_tie_goes_to_the_sure_side(self):
        assert unbiased_best_alternative_id(PENALTY) == "a1"
        swapped = make_problem("sw", [(-1_000_000, 95), (0, 5)], [(-950_000, 100)])
        assert unbiased_best_alternative_id(swapped) == "a2"

    def test_tie_without_a_sure_side_keeps_storage_order(self):
        problem = make_problem("t", [(-100, 50), (0, 50)], [(-50, 50), (-50, 50)])
        assert unbiased_best_alternative_id(problem) == "a1"


class TestAssess:
    def test_full_assessment_of_the_flagged_case(self):
        choice = make_choice(RESTRUCTURE, "alt2")
        result = assess(RESTRUCTURE, choice)
        assert result.risk_seeking_for_losses is True
        assert result.ev_per_alternative["alt1"].amount_minor == Decimal(-20_000_000)
        assert result.ev_per_alternative["alt2"].amount_minor == Decimal(-22_500_000)
        assert result.unbiased_best_alternative_id == "alt1"
        assert result.fourfold_cell is not None
        assert result.fourfold_cell.domain.value == "losses"
        assert result.fourfold_cell.probability_band.value == "high"
        assert result.mode is Mode.CANONICAL
        assert result.trace.verdict is True

    def test_fourfold_cell_absent_when_shape_does_not_fit(self):
        two_gambles = make_problem("g2", [(-1, 50), (0, 50)], [(-2, 50), (0, 50)])
        result = assess(two_gambles, make_choice(two_gambles, "a1"))
        assert result.fourfold_cell is None
        assert result.risk_seeking_for_losses is False

    def test_choice_must_belong_to_the_problem(self):
        stray = make_choice(PENALTY, "a1")
        with pytest.raises(InvalidValue):
            assess(RESTRUCTURE, stray)

    def test_unknown_chosen_alternative_is_rejected(self):
        bad = make_choice(RESTRUCTURE, "alt9")
        with pytest.raises(UnknownAlternative):
            assess(RESTRUCTURE, bad)

    def test_mode_accepts_plain_strings(self):
        choice = make_choice(RESTRUCTURE, "alt2")
        assert assess(RESTRUCTURE, choice, "strict").mode is Mode.STRICT

    def test_json_dict_shape(self):
        data = assess(RESTRUCTURE, make_choice(RESTRUCTURE, "alt2")).to_json_dict()
        assert data["risk_seeking_for_losses"] is True
        assert data["ev_per_alternative"]["alt2"] == {"amount_minor": "-22500000", "currency": "BRL"}
        assert [entry["name"] for entry in data["trace"]] == list(PREDICATE_NAMES)


class TestOracleEquivalence:
    def test_strict_mode_matches_the_literal_oracle(self):
        rng = random.Random(42_001)
        flagged = 0
        for i in range(1500):
            problem = random_problem(rng, i)
            outcome_sets = outcomes_of(problem)
            for chosen_index, alt in enumerate(problem.alternatives):
                expected = oracle_strict(outcome_sets, chosen_index)
                verdict, trace = is_risk_seeking_for_losses_choice(problem, alt.id, Mode.STRICT)
                assert [e.result for e in trace.entries] == expected
                assert verdict == all(expected)
                flagged += verdict
        assert flagged > 50  # the comparison must not be vacuous

    def test_canonical_mode_matches_the_rearranged_oracle(self):
        rng = random.Random(42_002)
        for i in range(1500):
            problem = random_problem(rng, i)
            outcome_sets = outcomes_of(problem)
            for chosen_index, alt in enumerate(problem.alternatives):
                expected = oracle_canonical(outcome_sets, chosen_index)
                verdict, trace = is_risk_seeking_for_losses_choice(problem, alt.id, Mode.CANONICAL)
                assert [e.result for e in trace.entries] == expected
                assert verdict == all(expected)
