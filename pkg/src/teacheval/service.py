"""Orchestration shared by the HTTP API and the CLI.

Ties the pure scoring/workflow functions to the store: opening a campaign
issues its token pool, closing it rolls the collected sheets up into stored
per-teacher student/self results, and the final evaluation gathers the four
source marks into the final qualificative.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import workflow
from .aggregation import FinalEvaluation, final_evaluation
from .core import (
    CohortStatistics,
    Competency,
    CompetencyScores,
    DivergenceFlag,
    EvaluationSource,
    GroupingLevel,
    QuestionnaireDefinition,
    Qualificative,
    cohort_statistics,
    competency_averages,
    divergence_flags,
    mean_of_scores,
)
from .errors import CampaignNotClosed, EmptyCohort, MissingSource
from .storage import EvaluationStore, StoredResult
from .workflow import Campaign, CampaignStatus, CollegialPhase


def open_campaign(
    store: EvaluationStore,
    campaign_id: str,
    definition: QuestionnaireDefinition,
    enrolled_students: int,
) -> tuple[Campaign, list[str]]:
    """Draft -> Open, minting one single-use submission token per student."""
    campaign = workflow.open_campaign(store.get_campaign(campaign_id), definition)
    store.save_campaign(campaign)
    tokens = store.issue_tokens(campaign_id, enrolled_students)
    return campaign, tokens


def _scores_payload(scores: CompetencyScores, sheet_count: int) -> dict:
    return {
        "per_competency": {c.value: scores.per_competency[c] for c in Competency},
        "overall": scores.overall,
        "sheet_count": sheet_count,
    }


def payload_to_scores(payload: dict) -> CompetencyScores:
    return CompetencyScores(
        per_competency={Competency(k): v for k, v in payload["per_competency"].items()},
        overall=payload["overall"],
    )


def compute_questionnaire_results(
    store: EvaluationStore,
    campaign_id: str,
    definition: QuestionnaireDefinition,
) -> int:
    """Roll every teacher's student and self sheets up into stored results.

    Each sheet is averaged on its own, then the sheets of one teacher and
    source are averaged with equal weight. Returns the number of results
    written.
    """
    written = 0
    for source in (EvaluationSource.STUDENT, EvaluationSource.SELF):
        for teacher_id in store.teachers_with_sheets(campaign_id, source):
            sheets = store.sheets_for(campaign_id, teacher_id, source)
            scores = mean_of_scores(competency_averages(s, definition) for s in sheets)
            store.store_result(StoredResult(
                teacher_id=teacher_id,
                campaign_id=campaign_id,
                source=source,
                payload=_scores_payload(scores, len(sheets)),
            ))
            written += 1
    return written


def close_campaign(
    store: EvaluationStore,
    campaign_id: str,
    definition: QuestionnaireDefinition,
) -> Campaign:
    """Open -> Closed, then score all collected questionnaires."""
    campaign = workflow.close_campaign(store.get_campaign(campaign_id))
    store.save_campaign(campaign)
    compute_questionnaire_results(store, campaign_id, definition)
    return campaign


def finalize_campaign(store: EvaluationStore, campaign_id: str) -> Campaign:
    campaign = workflow.finalize_campaign(store.get_campaign(campaign_id))
    store.save_campaign(campaign)
    return campaign


def store_collegial_result(store: EvaluationStore, evaluation_id: str) -> None:
    """Persist a completed collegial evaluation as that teacher's collegial
    result (its qualificative plus the per-criterion marks)."""
    evaluation = store.get_collegial(evaluation_id)
    if evaluation.phase is not CollegialPhase.COMPLETE or evaluation.result is None:
        return
    store.store_result(StoredResult(
        teacher_id=evaluation.evaluated_teacher_id,
        campaign_id=evaluation.campaign_id,
        source=EvaluationSource.COLLEGIAL,
        payload={
            "result": evaluation.result.value,
            "criteria_marks": {c.value: m.value for c, m in evaluation.criteria_marks.items()},
            "evaluation_id": evaluation.evaluation_id,
        },
    ))


@dataclass(frozen=True)
class SourceMarks:
    """The four marks feeding the final evaluation, as read from the store."""

    collegial: Qualificative
    chief_score: float
    student_score: float
    self_score: float


def gather_source_marks(store: EvaluationStore, teacher_id: str, campaign_id: str) -> SourceMarks:
    missing: list[str] = []
    payloads: dict[EvaluationSource, dict] = {}
    for source in (EvaluationSource.STUDENT, EvaluationSource.SELF,
                   EvaluationSource.COLLEGIAL, EvaluationSource.CHIEF):
        payload = store.get_result_payload(teacher_id, campaign_id, source)
        if payload is None:
            missing.append(source.value)
        else:
            payloads[source] = payload
    if missing:
        raise MissingSource(missing_sources=tuple(missing))
    return SourceMarks(
        collegial=Qualificative(payloads[EvaluationSource.COLLEGIAL]["result"]),
        chief_score=payloads[EvaluationSource.CHIEF]["weighted_score"],
        student_score=payloads[EvaluationSource.STUDENT]["overall"],
        self_score=payloads[EvaluationSource.SELF]["overall"],
    )


def build_final_evaluation(
    store: EvaluationStore, teacher_id: str, campaign_id: str
) -> FinalEvaluation:
    """Compute, persist and return the final four-source evaluation."""
    store.get_teacher(teacher_id)
    marks = gather_source_marks(store, teacher_id, campaign_id)
    final = final_evaluation(
        marks.collegial,
        marks.chief_score,
        marks.student_score,
        marks.self_score,
        teacher_id=teacher_id,
        campaign_id=campaign_id,
    )
    store.store_result(StoredResult(
        teacher_id=teacher_id,
        campaign_id=campaign_id,
        source=EvaluationSource.FINAL,
        payload={
            "collegial": final.collegial.value,
            "chief_score": final.chief_score,
            "student_score": final.student_score,
            "self_score": final.self_score,
            "final_score": final.final_score,
            "final_qualificative": final.final_qualificative.value,
        },
    ))
    return final


def cohort_report(
    store: EvaluationStore,
    campaign_id: str,
    grouping: GroupingLevel,
    name: str | None = None,
    require_closed: bool = True,
) -> CohortStatistics:
    """Anonymized per-competency min/max/mean over a chair, faculty or the
    whole university, from the stored student results."""
    campaign = store.get_campaign(campaign_id)
    if require_closed and campaign.status not in (CampaignStatus.CLOSED, CampaignStatus.FINALIZED):
        raise CampaignNotClosed(
            f"campaign {campaign_id} is {campaign.status.value}; close it before reporting")
    results = store.results_for_campaign(campaign_id, EvaluationSource.STUDENT)
    if grouping is not GroupingLevel.UNIVERSITY:
        members = {t.teacher_id for t in store.list_teachers(grouping, name)}
        results = {tid: p for tid, p in results.items() if tid in members}
    if not results:
        raise EmptyCohort(f"no scored teachers in this {grouping.value} cohort")
    score_sets = [payload_to_scores(p) for _, p in sorted(results.items())]
    return cohort_statistics(score_sets, grouping)


def divergence_report(
    store: EvaluationStore,
    teacher_id: str,
    campaign_id: str,
    threshold: float,
) -> list[DivergenceFlag]:
    """Self-vs-student gaps above the threshold, for the chief-of-staff debate."""
    self_payload = store.get_result_payload(teacher_id, campaign_id, EvaluationSource.SELF)
    student_payload = store.get_result_payload(teacher_id, campaign_id, EvaluationSource.STUDENT)
    missing = [name for name, payload in
               (("self", self_payload), ("student", student_payload)) if payload is None]
    if missing:
        raise MissingSource(missing_sources=tuple(missing))
    return divergence_flags(
        payload_to_scores(self_payload),
        payload_to_scores(student_payload),
        threshold,
    )
