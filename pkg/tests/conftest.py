from __future__ import annotations

import pytest

from teacheval import EvaluationStore, ResponseSheet
from teacheval.core import Competency, EvaluationSource, QuestionnaireDefinition
from teacheval.questionnaire import default_questionnaire


@pytest.fixture(scope="session")
def definition() -> QuestionnaireDefinition:
    return default_questionnaire()


def make_answers(
    definition: QuestionnaireDefinition,
    default: int = 3,
    per_competency: dict[Competency, int] | None = None,
) -> dict[str, int]:
    """Full 58-answer map: one constant, optionally overridden per competency."""
    per_competency = per_competency or {}
    return {
        item.item_id: per_competency.get(item.competency, default)
        for item in definition.items
    }


def make_sheet(
    definition: QuestionnaireDefinition,
    answers: dict[str, int],
    sheet_id: str = "sheet-1",
    campaign_id: str = "camp-1",
    source: EvaluationSource = EvaluationSource.STUDENT,
    teacher_id: str = "t1",
) -> ResponseSheet:
    return ResponseSheet(
        sheet_id=sheet_id,
        campaign_id=campaign_id,
        questionnaire_id=definition.questionnaire_id,
        source=source,
        subject_teacher_id=teacher_id,
        answers=answers,
    )


@pytest.fixture
def store(tmp_path) -> EvaluationStore:
    s = EvaluationStore(tmp_path / "teacheval.db")
    yield s
    s.close()
