"""Campaign lifecycle and the collegial-evaluation state machine.

Campaigns move strictly Draft -> Open -> Closed -> Finalized. A collegial
evaluation moves strictly PreObservation -> Observation -> PostObservation ->
Complete; it cannot leave pre-observation until both the evaluated teacher and
the evaluator consented to the appointment, and it only completes once all
four observation criteria carry a mark. The evaluator may decline at any point
before completion, which voids the record (participation is voluntary for the
evaluator, mandatory for the evaluated teacher).

All transitions are pure: they take a record and return a new one with the
version bumped, so the storage layer can compare-and-set concurrent updates.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from statistics import fmean

from .core import GroupingLevel, Qualificative, QuestionnaireDefinition, band
from .errors import (
    AlreadyComplete,
    AlreadyOpen,
    ConsentMissing,
    EmptyNotes,
    InvalidQuestionnaire,
    InvalidTransition,
    MissingCriteria,
    RecordVoided,
    SelfEvaluationForbidden,
)


class CampaignStatus(enum.Enum):
    DRAFT = "draft"
    OPEN = "open"
    CLOSED = "closed"
    FINALIZED = "finalized"


_CAMPAIGN_ORDER = [
    CampaignStatus.DRAFT,
    CampaignStatus.OPEN,
    CampaignStatus.CLOSED,
    CampaignStatus.FINALIZED,
]


@dataclass(frozen=True)
class Semester:
    academic_year: str  # e.g. "2024/2025"
    term: int

    def __post_init__(self) -> None:
        if self.term not in (1, 2):
            raise ValueError(f"term must be 1 or 2, got {self.term}")


@dataclass(frozen=True)
class Scope:
    level: GroupingLevel
    name: str


@dataclass(frozen=True)
class Campaign:
    campaign_id: str
    semester: Semester
    scope: Scope
    questionnaire_id: str
    status: CampaignStatus = CampaignStatus.DRAFT
    version: int = 0


def open_campaign(campaign: Campaign, definition: QuestionnaireDefinition) -> Campaign:
    """Draft -> Open. The questionnaire must be the campaign's own and valid
    (a definition instance is valid by construction)."""
    if campaign.status is CampaignStatus.OPEN:
        raise AlreadyOpen(f"campaign {campaign.campaign_id} is already open")
    if campaign.status is not CampaignStatus.DRAFT:
        raise InvalidTransition(
            f"cannot open a {campaign.status.value} campaign")
    if definition.questionnaire_id != campaign.questionnaire_id:
        raise InvalidQuestionnaire(
            f"campaign uses questionnaire {campaign.questionnaire_id!r}, "
            f"got {definition.questionnaire_id!r}")
    return replace(campaign, status=CampaignStatus.OPEN, version=campaign.version + 1)


def close_campaign(campaign: Campaign) -> Campaign:
    if campaign.status is not CampaignStatus.OPEN:
        raise InvalidTransition(f"cannot close a {campaign.status.value} campaign")
    return replace(campaign, status=CampaignStatus.CLOSED, version=campaign.version + 1)


def finalize_campaign(campaign: Campaign) -> Campaign:
    if campaign.status is not CampaignStatus.CLOSED:
        raise InvalidTransition(f"cannot finalize a {campaign.status.value} campaign")
    return replace(campaign, status=CampaignStatus.FINALIZED, version=campaign.version + 1)


class CollegialPhase(enum.Enum):
    PRE_OBSERVATION = "pre_observation"
    OBSERVATION = "observation"
    POST_OBSERVATION = "post_observation"
    COMPLETE = "complete"


PHASE_ORDER = [
    CollegialPhase.PRE_OBSERVATION,
    CollegialPhase.OBSERVATION,
    CollegialPhase.POST_OBSERVATION,
    CollegialPhase.COMPLETE,
]


class CollegialCriterion(enum.Enum):
    """What the observing fellow judges the lesson on."""

    TEACHING_ACTIVITY_CONTENT = "teaching_activity_content"
    LESSON_ORGANIZATION_PRESENTATION = "lesson_organization_presentation"
    LESSON_CLARITY = "lesson_clarity"
    CONNECTION_TO_STUDENTS = "connection_to_students"

    @property
    def label(self) -> str:
        return _COLLEGIAL_LABELS[self]


_COLLEGIAL_LABELS = {
    CollegialCriterion.TEACHING_ACTIVITY_CONTENT: "Teaching activity content",
    CollegialCriterion.LESSON_ORGANIZATION_PRESENTATION: "Lesson organization and presentation",
    CollegialCriterion.LESSON_CLARITY: "Lesson clarity",
    CollegialCriterion.CONNECTION_TO_STUDENTS: "Connection to the students",
}


class AppointingRole(enum.Enum):
    CHIEF_OF_STAFF = "chief_of_staff"
    DEAN = "dean"


class ConsentParty(enum.Enum):
    EVALUATED = "evaluated"
    EVALUATOR = "evaluator"


@dataclass(frozen=True)
class Appointment:
    appointed_by: AppointingRole
    evaluated_consent: bool = False
    evaluator_consent: bool = False


@dataclass(frozen=True)
class CollegialEvaluation:
    evaluation_id: str
    campaign_id: str
    evaluated_teacher_id: str
    evaluator_teacher_id: str
    appointment: Appointment
    phase: CollegialPhase = CollegialPhase.PRE_OBSERVATION
    phase_notes: Mapping[CollegialPhase, str] = field(default_factory=dict)
    criteria_marks: Mapping[CollegialCriterion, Qualificative] = field(default_factory=dict)
    result: Qualificative | None = None
    voided: bool = False
    version: int = 0

    def state_key(self) -> tuple:
        """Hashable snapshot of the machine-relevant state (for model checks)."""
        return (
            self.phase,
            self.appointment.evaluated_consent,
            self.appointment.evaluator_consent,
            tuple(sorted((c.value, m.value) for c, m in self.criteria_marks.items())),
            tuple(sorted(p.value for p in self.phase_notes)),
            self.result,
            self.voided,
        )


def appoint_collegial_evaluator(
    evaluation_id: str,
    campaign_id: str,
    evaluated_teacher_id: str,
    evaluator_teacher_id: str,
    appointed_by: AppointingRole,
) -> CollegialEvaluation:
    """Create a new record in pre-observation with both consents pending.

    Whether the two teacher ids exist is the storage layer's check; identity
    of evaluated and evaluator is forbidden here.
    """
    if evaluated_teacher_id == evaluator_teacher_id:
        raise SelfEvaluationForbidden(
            f"teacher {evaluated_teacher_id} cannot observe their own lesson")
    return CollegialEvaluation(
        evaluation_id=evaluation_id,
        campaign_id=campaign_id,
        evaluated_teacher_id=evaluated_teacher_id,
        evaluator_teacher_id=evaluator_teacher_id,
        appointment=Appointment(appointed_by=appointed_by),
    )


def _check_live(evaluation: CollegialEvaluation) -> None:
    if evaluation.voided:
        raise RecordVoided(f"evaluation {evaluation.evaluation_id} was voided")


def grant_consent(evaluation: CollegialEvaluation, party: ConsentParty) -> CollegialEvaluation:
    """Record a party's agreement to the appointment."""
    _check_live(evaluation)
    if evaluation.phase is CollegialPhase.COMPLETE:
        raise AlreadyComplete(f"evaluation {evaluation.evaluation_id} is complete")
    if party is ConsentParty.EVALUATED:
        appointment = replace(evaluation.appointment, evaluated_consent=True)
    else:
        appointment = replace(evaluation.appointment, evaluator_consent=True)
    return replace(evaluation, appointment=appointment, version=evaluation.version + 1)


def decline_evaluator(evaluation: CollegialEvaluation) -> CollegialEvaluation:
    """Evaluator refuses (participation is voluntary): the record is voided
    and a fresh appointment is required."""
    _check_live(evaluation)
    if evaluation.phase is CollegialPhase.COMPLETE:
        raise AlreadyComplete(f"evaluation {evaluation.evaluation_id} is complete")
    return replace(evaluation, voided=True, version=evaluation.version + 1)


def record_criterion_mark(
    evaluation: CollegialEvaluation,
    criterion: CollegialCriterion,
    mark: Qualificative,
) -> CollegialEvaluation:
    """Mark one criterion. Only possible during or after the observed lesson."""
    _check_live(evaluation)
    if evaluation.phase is CollegialPhase.COMPLETE:
        raise AlreadyComplete(f"evaluation {evaluation.evaluation_id} is complete")
    if evaluation.phase is CollegialPhase.PRE_OBSERVATION:
        raise InvalidTransition("criteria are marked during or after the observation")
    marks = dict(evaluation.criteria_marks)
    marks[criterion] = mark
    return replace(evaluation, criteria_marks=marks, version=evaluation.version + 1)


def record_criteria_marks(
    evaluation: CollegialEvaluation,
    marks: Mapping[CollegialCriterion, Qualificative],
) -> CollegialEvaluation:
    """Mark several criteria in one transition (one version bump)."""
    _check_live(evaluation)
    if evaluation.phase is CollegialPhase.COMPLETE:
        raise AlreadyComplete(f"evaluation {evaluation.evaluation_id} is complete")
    if evaluation.phase is CollegialPhase.PRE_OBSERVATION:
        raise InvalidTransition("criteria are marked during or after the observation")
    merged = dict(evaluation.criteria_marks)
    merged.update(marks)
    return replace(evaluation, criteria_marks=merged, version=evaluation.version + 1)


def collegial_result(marks: Mapping[CollegialCriterion, Qualificative]) -> Qualificative:
    """Band of the mean of the four criteria midpoints (the track stays
    qualitative end to end)."""
    missing = [c.value for c in CollegialCriterion if c not in marks]
    if missing:
        raise MissingCriteria(f"criteria not marked: {missing}", criteria=missing)
    return band(fmean(marks[c].midpoint for c in CollegialCriterion))


def advance_phase(evaluation: CollegialEvaluation, notes: str) -> CollegialEvaluation:
    """Move one phase forward, storing the discussion notes under the phase
    being left. Leaving pre-observation needs both consents; completing needs
    all four criteria marks and computes the result.
    """
    _check_live(evaluation)
    if evaluation.phase is CollegialPhase.COMPLETE:
        raise AlreadyComplete(f"evaluation {evaluation.evaluation_id} is complete")
    if not notes or not notes.strip():
        raise EmptyNotes("every phase ends with a discussion; notes are required")
    if evaluation.phase is CollegialPhase.PRE_OBSERVATION:
        appointment = evaluation.appointment
        if not (appointment.evaluated_consent and appointment.evaluator_consent):
            raise ConsentMissing(
                "both the evaluated teacher and the evaluator must consent first")
    result = evaluation.result
    next_phase = PHASE_ORDER[PHASE_ORDER.index(evaluation.phase) + 1]
    if next_phase is CollegialPhase.COMPLETE:
        result = collegial_result(evaluation.criteria_marks)
    notes_map = dict(evaluation.phase_notes)
    notes_map[evaluation.phase] = notes.strip()
    return replace(
        evaluation,
        phase=next_phase,
        phase_notes=notes_map,
        result=result,
        version=evaluation.version + 1,
    )


def finalize_collegial(evaluation: CollegialEvaluation, notes: str) -> CollegialEvaluation:
    """Final forward step: post-observation -> complete, with the result set."""
    if evaluation.phase is not CollegialPhase.POST_OBSERVATION and not evaluation.voided:
        if evaluation.phase is CollegialPhase.COMPLETE:
            raise AlreadyComplete(f"evaluation {evaluation.evaluation_id} is complete")
        raise InvalidTransition(
            f"cannot finalize from {evaluation.phase.value}; advance to post-observation first")
    return advance_phase(evaluation, notes)
