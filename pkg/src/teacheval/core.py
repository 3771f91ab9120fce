"""Domain types and scoring rules shared by all four evaluation sources.

Everything here is a pure function over immutable values: sheet validation,
per-competency averaging, banding of numeric scores into qualificatives,
self-vs-student divergence detection and cohort statistics. No I/O, no shared
mutable state; safe to call from any number of threads.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from functools import total_ordering
from statistics import fmean
from typing import NamedTuple

from .errors import EmptyCohort, Incomplete, OutOfRange, QuestionnaireMismatch, UnknownItem

ANSWER_MIN = 1
ANSWER_MAX = 5
TOTAL_ITEMS = 58

#: Five-point answer scale, highest agreement first.
ANSWER_LABELS = {
    5: "Always harmonizes",
    4: "Almost harmonizes",
    3: "Neither harmonizes nor discords",
    2: "Almost discords",
    1: "Always discords",
}

DEFAULT_DIVERGENCE_THRESHOLD = 0.5


class Title(enum.Enum):
    """Academic title of a teacher; drives the chief-evaluation weights."""

    PROFESSOR = "professor"
    ASSOCIATE_PROFESSOR = "associate_professor"
    ASSISTANT_PROFESSOR = "assistant_professor"
    UNIVERSITY_ASSISTANT = "university_assistant"
    INSTRUCTOR = "instructor"

    @property
    def label(self) -> str:
        return _TITLE_LABELS[self]


_TITLE_LABELS = {
    Title.PROFESSOR: "Professor",
    Title.ASSOCIATE_PROFESSOR: "Associate Professor",
    Title.ASSISTANT_PROFESSOR: "Assistant Professor",
    Title.UNIVERSITY_ASSISTANT: "University Assistant",
    Title.INSTRUCTOR: "Instructor",
}


class Competency(enum.Enum):
    """The four questionnaire dimensions answers are averaged over."""

    SCIENTIFIC = "scientific"
    PSYCHO_PEDAGOGICAL = "psycho_pedagogical"
    PSYCHOSOCIAL = "psychosocial"
    MANAGERIAL = "managerial"

    @property
    def item_count(self) -> int:
        return _ITEM_COUNTS[self]

    @property
    def label(self) -> str:
        return _COMPETENCY_LABELS[self]


# 12 + 20 + 13 + 13 = 58
_ITEM_COUNTS = {
    Competency.SCIENTIFIC: 12,
    Competency.PSYCHO_PEDAGOGICAL: 20,
    Competency.PSYCHOSOCIAL: 13,
    Competency.MANAGERIAL: 13,
}

_COMPETENCY_LABELS = {
    Competency.SCIENTIFIC: "Scientific",
    Competency.PSYCHO_PEDAGOGICAL: "Psycho-pedagogical",
    Competency.PSYCHOSOCIAL: "Psychosocial",
    Competency.MANAGERIAL: "Managerial",
}

assert sum(_ITEM_COUNTS.values()) == TOTAL_ITEMS


@total_ordering
class Qualificative(enum.Enum):
    """Verbal mark. Ordered worst to best; each band has a numeric midpoint."""

    VERY_POOR = "very_poor"
    POOR = "poor"
    MEDIUM = "medium"
    GOOD = "good"
    VERY_GOOD = "very_good"

    @property
    def rank(self) -> int:
        return _QUALIFICATIVE_RANKS[self]

    @property
    def midpoint(self) -> float:
        """Center of the band, used when a qualificative enters a numeric mean."""
        return self.rank + 0.5

    @property
    def label(self) -> str:
        return _QUALIFICATIVE_LABELS[self]

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Qualificative):
            return NotImplemented
        return self.rank < other.rank


_QUALIFICATIVE_RANKS = {
    Qualificative.VERY_POOR: 0,
    Qualificative.POOR: 1,
    Qualificative.MEDIUM: 2,
    Qualificative.GOOD: 3,
    Qualificative.VERY_GOOD: 4,
}

_QUALIFICATIVE_LABELS = {
    Qualificative.VERY_POOR: "Very Poor",
    Qualificative.POOR: "Poor",
    Qualificative.MEDIUM: "Medium",
    Qualificative.GOOD: "Good",
    Qualificative.VERY_GOOD: "Very Good",
}


class EvaluationSource(enum.Enum):
    """Where a mark comes from. Sheets use STUDENT/SELF; results use all five."""

    STUDENT = "student"
    SELF = "self"
    COLLEGIAL = "collegial"
    CHIEF = "chief"
    FINAL = "final"


SHEET_SOURCES = (EvaluationSource.STUDENT, EvaluationSource.SELF)


class GroupingLevel(enum.Enum):
    """Organizational level cohort statistics are reported on."""

    CHAIR = "chair"
    FACULTY = "faculty"
    UNIVERSITY = "university"


@dataclass(frozen=True)
class QuestionnaireItem:
    item_id: str
    text: str
    competency: Competency


@dataclass(frozen=True)
class QuestionnaireDefinition:
    """The 58-item questionnaire: 12 scientific, 20 psycho-pedagogical,
    13 psychosocial, 13 managerial items, in presentation order.

    Construction validates the layout; an instance is always well formed.
    """

    questionnaire_id: str
    items: tuple[QuestionnaireItem, ...]

    def __post_init__(self) -> None:
        # Local import: questionnaire-shape errors live beside the loader.
        from .errors import InvalidQuestionnaire

        if len(self.items) != TOTAL_ITEMS:
            raise InvalidQuestionnaire(
                f"questionnaire must have {TOTAL_ITEMS} items, got {len(self.items)}")
        ids = [item.item_id for item in self.items]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidQuestionnaire(f"duplicate item ids: {dupes}")
        for competency in Competency:
            count = sum(1 for item in self.items if item.competency is competency)
            if count != competency.item_count:
                raise InvalidQuestionnaire(
                    f"{competency.value} needs {competency.item_count} items, got {count}")
        object.__setattr__(self, "_by_id", {item.item_id: item for item in self.items})

    def item(self, item_id: str) -> QuestionnaireItem:
        return self._by_id[item_id]  # type: ignore[attr-defined]

    def has_item(self, item_id: str) -> bool:
        return item_id in self._by_id  # type: ignore[attr-defined]

    def item_ids(self) -> tuple[str, ...]:
        return tuple(item.item_id for item in self.items)

    def items_for(self, competency: Competency) -> tuple[QuestionnaireItem, ...]:
        return tuple(item for item in self.items if item.competency is competency)


@dataclass(frozen=True)
class ResponseSheet:
    """One respondent's answers to one campaign's questionnaire.

    Student sheets intentionally carry no respondent identity; the subject
    teacher is the person being evaluated, never the person answering.
    """

    sheet_id: str
    campaign_id: str
    questionnaire_id: str
    source: EvaluationSource
    subject_teacher_id: str
    answers: Mapping[str, int]

    def __post_init__(self) -> None:
        if self.source not in SHEET_SOURCES:
            raise ValueError(f"sheet source must be student or self, got {self.source}")


@dataclass(frozen=True)
class SheetValidation:
    """Outcome of :func:`validate_sheet`; empty ``missing_items`` means complete."""

    missing_items: tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.missing_items


@dataclass(frozen=True)
class CompetencyScores:
    """Per-competency means plus the overall mark for one teacher and source.

    ``overall`` is the unweighted mean of the four per-competency means, so
    each competency counts equally even though item counts differ.
    """

    per_competency: Mapping[Competency, float]
    overall: float

    def __post_init__(self) -> None:
        missing = [c for c in Competency if c not in self.per_competency]
        if missing:
            raise ValueError(f"scores missing competencies: {[c.value for c in missing]}")
        for competency, value in self.per_competency.items():
            if not ANSWER_MIN <= value <= ANSWER_MAX:
                raise ValueError(f"{competency.value} score {value} outside [1, 5]")
        if not ANSWER_MIN <= self.overall <= ANSWER_MAX:
            raise ValueError(f"overall score {self.overall} outside [1, 5]")

    @classmethod
    def from_competency_means(cls, per_competency: Mapping[Competency, float]) -> CompetencyScores:
        overall = fmean(per_competency[c] for c in Competency)
        return cls(per_competency=dict(per_competency), overall=overall)


class DivergenceFlag(NamedTuple):
    competency: Competency
    delta: float  # self minus student, signed


@dataclass(frozen=True)
class CompetencyStats:
    minimum: float
    maximum: float
    mean: float
    count: int


@dataclass(frozen=True)
class CohortStatistics:
    grouping: GroupingLevel
    per_competency: Mapping[Competency, CompetencyStats]

    @property
    def count(self) -> int:
        return next(iter(self.per_competency.values())).count


def validate_sheet(sheet: ResponseSheet, definition: QuestionnaireDefinition) -> SheetValidation:
    """Check a sheet against the completeness gate.

    Returns a validation listing every item that is unanswered or answered
    outside 1..5, in questionnaire order. Raises ``QuestionnaireMismatch``
    when the sheet references a different questionnaire and ``UnknownItem``
    when it answers an id the questionnaire does not contain.
    """
    if sheet.questionnaire_id != definition.questionnaire_id:
        raise QuestionnaireMismatch(
            f"sheet answers questionnaire {sheet.questionnaire_id!r}, "
            f"expected {definition.questionnaire_id!r}")
    unknown = sorted(item_id for item_id in sheet.answers if not definition.has_item(item_id))
    if unknown:
        raise UnknownItem(f"answers reference unknown items: {unknown}", items=unknown)
    bad: list[str] = []
    for item in definition.items:
        value = sheet.answers.get(item.item_id)
        if not (isinstance(value, int) and not isinstance(value, bool)
                and ANSWER_MIN <= value <= ANSWER_MAX):
            bad.append(item.item_id)
    return SheetValidation(missing_items=tuple(bad))


def competency_averages(sheet: ResponseSheet, definition: QuestionnaireDefinition) -> CompetencyScores:
    """Average a complete sheet into the four competency means and the overall.

    Raises ``Incomplete`` when the sheet does not pass :func:`validate_sheet`.
    """
    validation = validate_sheet(sheet, definition)
    if not validation.complete:
        raise Incomplete(missing_items=validation.missing_items)
    per: dict[Competency, float] = {}
    for competency in Competency:
        values = [sheet.answers[item.item_id] for item in definition.items_for(competency)]
        per[competency] = fmean(values)
    return CompetencyScores.from_competency_means(per)


def band(score: float) -> Qualificative:
    """Map a numeric score in [0, 5] to its qualificative.

    The score is first rounded half-up to two decimals (scores are published
    with two decimals), then banded with inclusive upper edges: [0, 1.00]
    very poor, (1.00, 2.00] poor, (2.00, 3.00] medium, (3.00, 4.00] good,
    (4.00, 5.00] very good.
    """
    if not 0.0 <= score <= 5.0:
        raise OutOfRange(f"score {score} outside [0, 5]")
    rounded = Decimal(str(score)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    if rounded <= 1:
        return Qualificative.VERY_POOR
    if rounded <= 2:
        return Qualificative.POOR
    if rounded <= 3:
        return Qualificative.MEDIUM
    if rounded <= 4:
        return Qualificative.GOOD
    return Qualificative.VERY_GOOD


def divergence_flags(
    self_scores: CompetencyScores,
    student_scores: CompetencyScores,
    threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
) -> list[DivergenceFlag]:
    """Competencies where self and student assessments differ by more than
    ``threshold``, with the signed delta (self minus student).

    An empty list means no debate with the chief of staff is required.
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    flags = []
    for competency in Competency:
        delta = self_scores.per_competency[competency] - student_scores.per_competency[competency]
        if abs(delta) > threshold:
            flags.append(DivergenceFlag(competency, delta))
    return flags


def cohort_statistics(
    score_sets: Sequence[CompetencyScores],
    grouping: GroupingLevel,
) -> CohortStatistics:
    """Per-competency min/max/mean over a group of teachers' scores."""
    if not score_sets:
        raise EmptyCohort(f"no scores in {grouping.value} cohort")
    per: dict[Competency, CompetencyStats] = {}
    for competency in Competency:
        values = [scores.per_competency[competency] for scores in score_sets]
        per[competency] = CompetencyStats(
            minimum=min(values),
            maximum=max(values),
            mean=fmean(values),
            count=len(values),
        )
    return CohortStatistics(grouping=grouping, per_competency=per)


def mean_of_scores(score_sets: Iterable[CompetencyScores]) -> CompetencyScores:
    """Average several score sets into one (e.g. all of a teacher's sheets).

    Each sheet counts equally: the result's competency means are the plain
    means of the inputs' competency means.
    """
    sets = list(score_sets)
    if not sets:
        raise EmptyCohort("cannot average an empty list of scores")
    per = {
        competency: fmean(s.per_competency[competency] for s in sets)
        for competency in Competency
    }
    return CompetencyScores.from_competency_means(per)
