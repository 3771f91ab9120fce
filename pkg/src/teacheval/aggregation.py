"""Chief-of-staff weighted scoring and the final four-source aggregation.

The chief of staff scores seven activity criteria on the same 1..5 scale as
the questionnaire; each criterion's weight depends on the teacher's title and
every title's weights sum to exactly 100 percent. The final evaluation is the
plain mean of the four source marks (collegial band midpoint, chief, student,
self), banded into the final qualificative.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import yaml

from .core import ANSWER_MAX, ANSWER_MIN, Qualificative, Title, band
from .errors import InvalidWeights, MissingCriterion, OutOfRange


class ChiefCriterion(enum.Enum):
    """The seven activity criteria of the chief-of-staff evaluation."""

    DIDACTIC_MATERIALS = "didactic_materials"
    SCIENTIFIC_RESEARCH = "scientific_research"
    STUDENT_ACTIVITY = "student_activity"
    NATIONAL_RECOGNITION = "national_recognition"
    INTERNATIONAL_RECOGNITION = "international_recognition"
    ACADEMIC_COMMUNITY = "academic_community"
    INSTITUTIONAL_DEVELOPMENT = "institutional_development"

    @property
    def label(self) -> str:
        return _CRITERION_LABELS[self]


_CRITERION_LABELS = {
    ChiefCriterion.DIDACTIC_MATERIALS: "Elaboration of didactic materials",
    ChiefCriterion.SCIENTIFIC_RESEARCH: "Scientific research",
    ChiefCriterion.STUDENT_ACTIVITY: "Activity with the students",
    ChiefCriterion.NATIONAL_RECOGNITION: "National recognition",
    ChiefCriterion.INTERNATIONAL_RECOGNITION: "International recognition",
    ChiefCriterion.ACADEMIC_COMMUNITY: "Activity in the academic community",
    ChiefCriterion.INSTITUTIONAL_DEVELOPMENT: "Participation to institutional development",
}

# Default weights in percent, per title, in criterion order:
# (didactic materials, research, student activity, national recognition,
#  international recognition, academic community, institutional development).
# Every row sums to 100.
_DEFAULT_ROWS: dict[Title, tuple[int, ...]] = {
    Title.PROFESSOR: (10, 30, 10, 10, 15, 10, 15),
    Title.ASSOCIATE_PROFESSOR: (15, 25, 10, 20, 5, 10, 15),
    Title.ASSISTANT_PROFESSOR: (10, 25, 20, 15, 0, 15, 15),
    Title.UNIVERSITY_ASSISTANT: (5, 25, 25, 5, 0, 30, 10),
    Title.INSTRUCTOR: (5, 25, 25, 5, 0, 30, 10),
}


@dataclass(frozen=True)
class WeightTable:
    """Title x criterion percentage matrix; validated at construction."""

    weights: Mapping[Title, Mapping[ChiefCriterion, int]]

    def __post_init__(self) -> None:
        for title in Title:
            row = self.weights.get(title)
            if row is None:
                raise InvalidWeights(f"no weights for title {title.value!r}")
            for criterion in ChiefCriterion:
                if criterion not in row:
                    raise InvalidWeights(
                        f"title {title.value!r} has no weight for {criterion.value!r}")
                value = row[criterion]
                if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 100:
                    raise InvalidWeights(
                        f"weight for ({title.value}, {criterion.value}) must be an "
                        f"integer percent in 0..100, got {value!r}")
            total = sum(row[criterion] for criterion in ChiefCriterion)
            if total != 100:
                raise InvalidWeights(
                    f"weights for title {title.value!r} sum to {total}, expected 100")

    def weight(self, title: Title, criterion: ChiefCriterion) -> int:
        return self.weights[title][criterion]


def default_weight_table() -> WeightTable:
    return WeightTable(weights={
        title: dict(zip(ChiefCriterion, row)) for title, row in _DEFAULT_ROWS.items()
    })


def parse_weight_table(data: object) -> WeightTable:
    """Build a weight table from parsed YAML: rows are criteria, columns titles."""
    if not isinstance(data, dict) or not isinstance(data.get("weights"), dict):
        raise InvalidWeights("weight table file needs a top-level 'weights' mapping")
    raw = data["weights"]
    table: dict[Title, dict[ChiefCriterion, int]] = {title: {} for title in Title}
    for criterion_name, row in raw.items():
        try:
            criterion = ChiefCriterion(criterion_name)
        except ValueError:
            raise InvalidWeights(f"unknown criterion {criterion_name!r}") from None
        if not isinstance(row, dict):
            raise InvalidWeights(f"row for {criterion_name!r} must map titles to percents")
        for title_name, value in row.items():
            try:
                title = Title(title_name)
            except ValueError:
                raise InvalidWeights(f"unknown title {title_name!r}") from None
            table[title][criterion] = value
    return WeightTable(weights=table)


def load_weight_table(path: str | Path) -> WeightTable:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidWeights(f"cannot read weight table file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise InvalidWeights(f"weight table file {path} is not valid YAML: {exc}") from exc
    return parse_weight_table(data)


def weight_table_to_yaml(table: WeightTable) -> str:
    """Serialize a table in the row-per-criterion layout ``init`` writes out."""
    lines = ["weights:"]
    for criterion in ChiefCriterion:
        cells = ", ".join(
            f"{title.value}: {table.weight(title, criterion)}" for title in Title)
        lines.append(f"  {criterion.value}: {{{cells}}}")
    return "\n".join(lines) + "\n"


def weighted_chief_score(
    criterion_scores: Mapping[ChiefCriterion, float],
    title: Title,
    table: WeightTable | None = None,
) -> float:
    """Weighted mean of the seven criterion scores for the given title.

    Weights sum to 100, so the result stays within [min, max] of the inputs.
    """
    table = table or default_weight_table()
    missing = [c.value for c in ChiefCriterion if c not in criterion_scores]
    if missing:
        raise MissingCriterion(f"criteria not scored: {missing}", criteria=missing)
    for criterion in ChiefCriterion:
        value = criterion_scores[criterion]
        if not ANSWER_MIN <= value <= ANSWER_MAX:
            raise OutOfRange(f"{criterion.value} score {value} outside [1, 5]")
    return sum(
        table.weight(title, criterion) / 100 * criterion_scores[criterion]
        for criterion in ChiefCriterion
    )


@dataclass(frozen=True)
class ChiefAssessment:
    teacher_id: str
    title: Title
    criterion_scores: Mapping[ChiefCriterion, float]
    weighted_score: float


def make_chief_assessment(
    teacher_id: str,
    title: Title,
    criterion_scores: Mapping[ChiefCriterion, float],
    table: WeightTable | None = None,
) -> ChiefAssessment:
    return ChiefAssessment(
        teacher_id=teacher_id,
        title=title,
        criterion_scores=dict(criterion_scores),
        weighted_score=weighted_chief_score(criterion_scores, title, table),
    )


@dataclass(frozen=True)
class FinalEvaluation:
    """The four source marks and the final qualificative they average to."""

    teacher_id: str
    campaign_id: str
    collegial: Qualificative
    chief_score: float
    student_score: float
    self_score: float
    final_score: float
    final_qualificative: Qualificative


def final_evaluation(
    collegial: Qualificative,
    chief_score: float,
    student_score: float,
    self_score: float,
    *,
    teacher_id: str = "",
    campaign_id: str = "",
) -> FinalEvaluation:
    """Average the four sources into the final mark and band it.

    The collegial track is qualitative; it enters the mean through its band
    midpoint (very good 4.5 ... very poor 0.5). The three numeric marks enter
    unchanged. Symmetric in the three numeric arguments.
    """
    for name, score in (("chief", chief_score), ("student", student_score), ("self", self_score)):
        if not 0.0 <= score <= 5.0:
            raise OutOfRange(f"{name} score {score} outside [0, 5]")
    final_score = (collegial.midpoint + chief_score + student_score + self_score) / 4
    return FinalEvaluation(
        teacher_id=teacher_id,
        campaign_id=campaign_id,
        collegial=collegial,
        chief_score=chief_score,
        student_score=student_score,
        self_score=self_score,
        final_score=final_score,
        final_qualificative=band(final_score),
    )
