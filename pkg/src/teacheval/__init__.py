"""Four-source faculty evaluation: student questionnaires, self evaluation,
collegial observation and the chief-of-staff's weighted assessment, aggregated
into a final qualificative with confidential, role-gated result access."""

from .aggregation import (
    ChiefAssessment,
    ChiefCriterion,
    FinalEvaluation,
    WeightTable,
    default_weight_table,
    final_evaluation,
    load_weight_table,
    make_chief_assessment,
    weighted_chief_score,
)
from .core import (
    ANSWER_LABELS,
    ANSWER_MAX,
    ANSWER_MIN,
    TOTAL_ITEMS,
    CohortStatistics,
    Competency,
    CompetencyScores,
    DivergenceFlag,
    EvaluationSource,
    GroupingLevel,
    Qualificative,
    QuestionnaireDefinition,
    QuestionnaireItem,
    ResponseSheet,
    SheetValidation,
    Title,
    band,
    cohort_statistics,
    competency_averages,
    divergence_flags,
    mean_of_scores,
    validate_sheet,
)
from .errors import DomainError, error_catalog
from .questionnaire import default_questionnaire, load_questionnaire
from .storage import EvaluationStore, Principal, Role, StoredResult, Teacher, can_read_result
from .workflow import (
    Campaign,
    CampaignStatus,
    CollegialCriterion,
    CollegialEvaluation,
    CollegialPhase,
    Scope,
    Semester,
    advance_phase,
    appoint_collegial_evaluator,
    close_campaign,
    collegial_result,
    finalize_campaign,
    grant_consent,
    open_campaign,
)

__version__ = "0.1.0"
