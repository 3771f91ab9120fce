from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from teacheval.core import (
    Competency,
    CompetencyScores,
    GroupingLevel,
    Qualificative,
    band,
    cohort_statistics,
    competency_averages,
    divergence_flags,
    mean_of_scores,
    validate_sheet,
)
from teacheval.errors import EmptyCohort, Incomplete, OutOfRange, QuestionnaireMismatch, UnknownItem

from conftest import make_answers, make_sheet


def scores(sci: float, ped: float, soc: float, mgr: float) -> CompetencyScores:
    return CompetencyScores.from_competency_means({
        Competency.SCIENTIFIC: sci,
        Competency.PSYCHO_PEDAGOGICAL: ped,
        Competency.PSYCHOSOCIAL: soc,
        Competency.MANAGERIAL: mgr,
    })


# -- validate_sheet -------------------------------------------------------------


def test_fully_answered_sheet_is_complete(definition):
    sheet = make_sheet(definition, make_answers(definition, 3))
    assert validate_sheet(sheet, definition).complete


def test_57_answers_is_incomplete_listing_the_missing_id(definition):
    answers = make_answers(definition, 3)
    dropped = definition.items[7].item_id
    del answers[dropped]
    validation = validate_sheet(make_sheet(definition, answers), definition)
    assert not validation.complete
    assert validation.missing_items == (dropped,)


def test_zero_answer_value_is_flagged_as_invalid(definition):
    answers = make_answers(definition, 3)
    bad = definition.items[20].item_id
    answers[bad] = 0
    validation = validate_sheet(make_sheet(definition, answers), definition)
    assert validation.missing_items == (bad,)


@pytest.mark.parametrize("value", [6, -1, "3", 3.5, True, None])
def test_non_scale_values_are_invalid(definition, value):
    answers = make_answers(definition, 3)
    answers[definition.items[0].item_id] = value
    validation = validate_sheet(make_sheet(definition, answers), definition)
    assert definition.items[0].item_id in validation.missing_items


def test_questionnaire_mismatch(definition):
    from teacheval.core import EvaluationSource, ResponseSheet

    sheet = ResponseSheet(
        sheet_id="s1", campaign_id="c1", questionnaire_id="other-58",
        source=EvaluationSource.STUDENT, subject_teacher_id="t1",
        answers=make_answers(definition, 3),
    )
    with pytest.raises(QuestionnaireMismatch):
        validate_sheet(sheet, definition)


def test_unknown_item_rejected(definition):
    answers = make_answers(definition, 3)
    answers["made-up-item"] = 3
    with pytest.raises(UnknownItem):
        validate_sheet(make_sheet(definition, answers), definition)


# -- competency_averages ---------------------------------------------------------


def test_constant_fives(definition):
    result = competency_averages(make_sheet(definition, make_answers(definition, 5)), definition)
    assert all(result.per_competency[c] == 5.0 for c in Competency)
    assert result.overall == 5.0


def test_constant_ones(definition):
    result = competency_averages(make_sheet(definition, make_answers(definition, 1)), definition)
    assert all(result.per_competency[c] == 1.0 for c in Competency)
    assert result.overall == 1.0


def test_scientific_four_rest_two(definition):
    answers = make_answers(definition, 2, {Competency.SCIENTIFIC: 4})
    result = competency_averages(make_sheet(definition, answers), definition)
    assert result.per_competency[Competency.SCIENTIFIC] == pytest.approx(4.0)
    assert result.per_competency[Competency.PSYCHO_PEDAGOGICAL] == pytest.approx(2.0)
    assert result.per_competency[Competency.PSYCHOSOCIAL] == pytest.approx(2.0)
    assert result.per_competency[Competency.MANAGERIAL] == pytest.approx(2.0)
    # (4 + 2 + 2 + 2) / 4, not the mean of all 58 answers
    assert result.overall == pytest.approx(2.5)


def test_incomplete_sheet_refused(definition):
    answers = make_answers(definition, 3)
    del answers[definition.items[0].item_id]
    with pytest.raises(Incomplete):
        competency_averages(make_sheet(definition, answers), definition)


def test_averages_match_brute_force(definition):
    rng = random.Random(1234)
    for _ in range(200):
        answers = {item.item_id: rng.randint(1, 5) for item in definition.items}
        result = competency_averages(make_sheet(definition, answers), definition)
        for competency in Competency:
            items = [i for i in definition.items if i.competency is competency]
            expected = sum(answers[i.item_id] for i in items) / len(items)
            assert abs(result.per_competency[competency] - expected) < 1e-9
        expected_overall = sum(result.per_competency[c] for c in Competency) / 4
        assert abs(result.overall - expected_overall) < 1e-9
        assert 1.0 <= result.overall <= 5.0


# -- band --------------------------------------------------------------------------


@pytest.mark.parametrize("score,expected", [
    (0.0, Qualificative.VERY_POOR),
    (1.00, Qualificative.VERY_POOR),
    (1.01, Qualificative.POOR),
    (2.00, Qualificative.POOR),
    (2.01, Qualificative.MEDIUM),
    (3.00, Qualificative.MEDIUM),
    (3.01, Qualificative.GOOD),
    (4.00, Qualificative.GOOD),
    (4.01, Qualificative.VERY_GOOD),
    (4.11, Qualificative.VERY_GOOD),
    (5.00, Qualificative.VERY_GOOD),
])
def test_band_published_ranges(score, expected):
    assert band(score) is expected


def test_band_rounds_to_two_decimals_before_banding():
    assert band(3.004) is Qualificative.MEDIUM   # 3.004 -> 3.00
    assert band(3.005) is Qualificative.GOOD     # half-up -> 3.01
    assert band(4.004) is Qualificative.GOOD
    assert band(4.005) is Qualificative.VERY_GOOD


@pytest.mark.parametrize("score", [-0.01, 5.01, -5, 7])
def test_band_out_of_range(score):
    with pytest.raises(OutOfRange):
        band(score)


def test_band_of_midpoint_returns_the_band():
    for qualificative in Qualificative:
        assert band(qualificative.midpoint) is qualificative


def test_band_sweep_is_exhaustive_and_monotone():
    previous_rank = -1
    for i in range(0, 1001):
        score = i * 0.005
        rank = band(score).rank
        assert rank >= previous_rank
        previous_rank = rank


# -- divergence ---------------------------------------------------------------------


def test_identical_scores_do_not_diverge():
    a = scores(4.0, 4.0, 4.0, 4.0)
    assert divergence_flags(a, a, 0.5) == []


def test_gap_at_threshold_is_not_flagged():
    self_side = scores(4.26, 4.0, 4.0, 4.0)
    student_side = scores(3.80, 4.0, 4.0, 4.0)
    assert divergence_flags(self_side, student_side, 0.5) == []  # 0.46 <= 0.5


def test_gap_above_threshold_is_flagged_with_signed_delta():
    self_side = scores(4.0, 4.0, 4.0, 4.8)
    student_side = scores(4.0, 4.0, 4.0, 4.0)
    flags = divergence_flags(self_side, student_side, 0.5)
    assert len(flags) == 1
    assert flags[0].competency is Competency.MANAGERIAL
    assert flags[0].delta == pytest.approx(0.8)


def test_threshold_must_be_positive():
    a = scores(4.0, 4.0, 4.0, 4.0)
    with pytest.raises(ValueError):
        divergence_flags(a, a, 0.0)


@given(
    values=st.lists(st.floats(min_value=1.0, max_value=5.0, allow_nan=False), min_size=8, max_size=8),
    threshold=st.floats(min_value=0.01, max_value=4.0, allow_nan=False),
)
def test_divergence_is_symmetric_with_negated_deltas(values, threshold):
    a = scores(*values[:4])
    b = scores(*values[4:])
    forward = divergence_flags(a, b, threshold)
    backward = divergence_flags(b, a, threshold)
    assert [f.competency for f in forward] == [f.competency for f in backward]
    for f, g in zip(forward, backward):
        assert f.delta == pytest.approx(-g.delta)


# -- cohort statistics --------------------------------------------------------------


def test_singleton_cohort():
    stats = cohort_statistics([scores(4.0, 4.0, 4.0, 4.0)], GroupingLevel.CHAIR)
    s = stats.per_competency[Competency.SCIENTIFIC]
    assert s.minimum == s.maximum == s.mean == 4.0
    assert s.count == 1


def test_two_teacher_cohort_spans_the_range():
    stats = cohort_statistics(
        [scores(3.8, 4.0, 4.0, 4.0), scores(4.2, 4.0, 4.0, 4.0)],
        GroupingLevel.FACULTY,
    )
    s = stats.per_competency[Competency.SCIENTIFIC]
    assert s.minimum == pytest.approx(3.8)
    assert s.maximum == pytest.approx(4.2)
    assert s.mean == pytest.approx(4.0)
    assert s.count == 2


def test_empty_cohort_rejected():
    with pytest.raises(EmptyCohort):
        cohort_statistics([], GroupingLevel.UNIVERSITY)


def test_cohort_min_mean_max_ordered_and_match_brute_force():
    rng = random.Random(77)
    sets = [scores(*(rng.uniform(1, 5) for _ in range(4))) for _ in range(25)]
    stats = cohort_statistics(sets, GroupingLevel.UNIVERSITY)
    for competency in Competency:
        values = [s.per_competency[competency] for s in sets]
        entry = stats.per_competency[competency]
        assert entry.minimum <= entry.mean <= entry.maximum
        assert entry.minimum == min(values)
        assert entry.maximum == max(values)
        assert entry.mean == pytest.approx(sum(values) / len(values))
        assert entry.count == 25


def test_mean_of_scores_weighs_each_sheet_equally():
    merged = mean_of_scores([scores(3.0, 3.0, 3.0, 3.0), scores(5.0, 4.0, 3.0, 2.0)])
    assert merged.per_competency[Competency.SCIENTIFIC] == pytest.approx(4.0)
    assert merged.per_competency[Competency.MANAGERIAL] == pytest.approx(2.5)


def test_mean_of_scores_empty_rejected():
    with pytest.raises(EmptyCohort):
        mean_of_scores([])
