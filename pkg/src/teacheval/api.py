"""HTTP API: campaign administration, sheet submission, collegial workflow,
chief assessments, results and statistics.

Versioned under ``/api/v1``. Every domain error surfaces as a 4xx JSON body
``{"code": <error name>, "detail": ...}`` whose code set is exactly the
package's error catalog; 5xx is reserved for storage faults. Mutating
endpoints honor an ``Idempotency-Key`` header: a retry with the same key
replays the first response instead of re-executing.

Authentication is a local credential store with session tokens (header
``X-Session-Token``); the one exception is student sheet submission, which
authenticates with a single-use campaign token instead of a session.
"""

from __future__ import annotations

import sqlite3

import uvicorn
from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from starlette.middleware.base import BaseHTTPMiddleware

from . import service
from .aggregation import ChiefCriterion, WeightTable, make_chief_assessment
from .config import AppConfig
from .core import (
    ANSWER_LABELS,
    Competency,
    EvaluationSource,
    GroupingLevel,
    Qualificative,
    QuestionnaireDefinition,
    SHEET_SOURCES,
    Title,
)
from .errors import Denied, DomainError, OutOfRange, Unauthorized
from .storage import (
    STATISTICS_ROLES,
    EvaluationStore,
    Principal,
    Role,
    StoredResult,
    Teacher,
    new_sheet_id,
)
from .workflow import (
    AppointingRole,
    Campaign,
    CollegialCriterion,
    CollegialEvaluation,
    CollegialPhase,
    ConsentParty,
    Scope,
    Semester,
    advance_phase,
    appoint_collegial_evaluator,
    decline_evaluator,
    grant_consent,
    record_criteria_marks,
)
from .core import ResponseSheet

API_PREFIX = "/api/v1"


# -- request bodies -----------------------------------------------------------

class LoginRequest(BaseModel):
    principal_id: str
    password: str


class TeacherRequest(BaseModel):
    teacher_id: str
    name: str
    title: Title
    chair: str
    faculty: str


class PrincipalRequest(BaseModel):
    principal_id: str
    display_name: str
    roles: list[Role]
    password: str
    teacher_id: str | None = None


class CampaignRequest(BaseModel):
    campaign_id: str
    academic_year: str
    term: int = Field(ge=1, le=2)
    scope_level: GroupingLevel
    scope_name: str
    questionnaire_id: str | None = None


class OpenCampaignRequest(BaseModel):
    enrolled_students: int = Field(ge=0)


class SheetRequest(BaseModel):
    source: EvaluationSource
    subject_teacher_id: str
    answers: dict[str, int]
    token: str | None = None


class CollegialCreateRequest(BaseModel):
    campaign_id: str
    evaluated_teacher_id: str
    evaluator_teacher_id: str
    evaluation_id: str | None = None


class ConsentRequest(BaseModel):
    party: ConsentParty
    granted: bool = True


class AdvanceRequest(BaseModel):
    notes: str


class MarksRequest(BaseModel):
    marks: dict[CollegialCriterion, Qualificative]


class ChiefAssessmentRequest(BaseModel):
    campaign_id: str
    criterion_scores: dict[ChiefCriterion, float]


class FinalEvaluationRequest(BaseModel):
    campaign_id: str


# -- serializers ---------------------------------------------------------------

def _campaign_dict(campaign: Campaign, counters: tuple[int, int]) -> dict:
    accepted, rejected = counters
    return {
        "campaign_id": campaign.campaign_id,
        "academic_year": campaign.semester.academic_year,
        "term": campaign.semester.term,
        "scope_level": campaign.scope.level.value,
        "scope_name": campaign.scope.name,
        "questionnaire_id": campaign.questionnaire_id,
        "status": campaign.status.value,
        "accepted_sheets": accepted,
        "rejected_sheets": rejected,
    }


def _collegial_dict(evaluation: CollegialEvaluation) -> dict:
    return {
        "evaluation_id": evaluation.evaluation_id,
        "campaign_id": evaluation.campaign_id,
        "evaluated_teacher_id": evaluation.evaluated_teacher_id,
        "evaluator_teacher_id": evaluation.evaluator_teacher_id,
        "appointed_by": evaluation.appointment.appointed_by.value,
        "evaluated_consent": evaluation.appointment.evaluated_consent,
        "evaluator_consent": evaluation.appointment.evaluator_consent,
        "phase": evaluation.phase.value,
        "phase_notes": {p.value: n for p, n in evaluation.phase_notes.items()},
        "criteria_marks": {c.value: m.value for c, m in evaluation.criteria_marks.items()},
        "result": evaluation.result.value if evaluation.result else None,
        "voided": evaluation.voided,
    }


# -- middleware ------------------------------------------------------------------

class IdempotencyMiddleware(BaseHTTPMiddleware):
    """Replay the stored response for a repeated (key, method, path)."""

    async def dispatch(self, request: Request, call_next):
        key = request.headers.get("Idempotency-Key")
        if not key or request.method not in ("POST", "PUT", "PATCH", "DELETE"):
            return await call_next(request)
        store: EvaluationStore = request.app.state.store
        fingerprint = f"{request.method}:{request.url.path}"
        cached = store.idempotency_get(key, fingerprint)
        if cached is not None:
            status, content_type, body = cached
            return Response(content=body, status_code=status, media_type=content_type,
                            headers={"Idempotency-Replayed": "true"})
        response = await call_next(request)
        body = b"".join([chunk async for chunk in response.body_iterator])
        if response.status_code < 500:
            store.idempotency_put(key, fingerprint, response.status_code,
                                  response.headers.get("content-type", "application/json"),
                                  body)
        headers = {k: v for k, v in response.headers.items() if k.lower() != "content-length"}
        return Response(content=body, status_code=response.status_code, headers=headers)


# -- app factory -------------------------------------------------------------------

def create_app(
    config: AppConfig | None = None,
    store: EvaluationStore | None = None,
    definition: QuestionnaireDefinition | None = None,
    weight_table: WeightTable | None = None,
) -> FastAPI:
    config = config or AppConfig()
    store = store or EvaluationStore(config.storage_path)
    definition = definition or config.load_questionnaire()
    weight_table = weight_table or config.load_weight_table()

    app = FastAPI(title="teacheval", version="1.0.0")
    app.state.store = store
    app.state.definition = definition
    app.state.weight_table = weight_table
    app.state.config = config

    app.add_middleware(IdempotencyMiddleware)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(DomainError)
    async def domain_error_handler(_request: Request, exc: DomainError):
        body = {"code": exc.code, "detail": exc.detail}
        body.update(exc.context)
        return JSONResponse(status_code=exc.http_status, content=body)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"code": "ValidationError", "detail": str(exc.errors())})

    @app.exception_handler(ValueError)
    async def value_error_handler(_request: Request, exc: ValueError):
        return JSONResponse(status_code=422,
                            content={"code": "ValidationError", "detail": str(exc)})

    @app.exception_handler(sqlite3.Error)
    async def storage_fault_handler(_request: Request, exc: sqlite3.Error):
        return JSONResponse(status_code=500,
                            content={"code": "StorageFault", "detail": str(exc)})

    # -- auth helpers -----------------------------------------------------------

    def current_principal(
        request: Request,
        x_session_token: str | None = Header(default=None, alias="X-Session-Token"),
    ) -> Principal:
        if not x_session_token:
            raise Unauthorized("missing X-Session-Token header")
        return request.app.state.store.resolve_session(x_session_token)

    def require_roles(*roles: Role):
        def guard(principal: Principal = Depends(current_principal)) -> Principal:
            if not set(roles) & principal.roles:
                raise Denied("requires one of: " + ", ".join(r.value for r in roles))
            return principal
        return guard

    admin_only = require_roles(Role.ADMIN)
    chief_or_dean = require_roles(Role.CHIEF_OF_STAFF, Role.DEAN)

    # -- plumbing ------------------------------------------------------------------

    @app.get(API_PREFIX + "/health")
    def health():
        return {"ok": True, "service": "teacheval"}

    @app.post(API_PREFIX + "/sessions")
    def login(body: LoginRequest):
        principal = store.verify_credentials(body.principal_id, body.password)
        token, expires_at = store.create_session(
            principal.principal_id, config.session_ttl_minutes * 60)
        return {
            "session_token": token,
            "expires_at": expires_at,
            "principal_id": principal.principal_id,
            "roles": sorted(r.value for r in principal.roles),
            "teacher_id": principal.teacher_id,
        }

    # -- directory ---------------------------------------------------------------------

    @app.post(API_PREFIX + "/teachers", status_code=201)
    def add_teacher(body: TeacherRequest, _: Principal = Depends(admin_only)):
        store.add_teacher(Teacher(body.teacher_id, body.name, body.title,
                                  body.chair, body.faculty))
        return {"teacher_id": body.teacher_id}

    @app.get(API_PREFIX + "/teachers")
    def list_teachers(
        _: Principal = Depends(require_roles(
            Role.ADMIN, Role.CHIEF_OF_STAFF, Role.DEAN, Role.RECTOR)),
    ):
        return [
            {"teacher_id": t.teacher_id, "name": t.name, "title": t.title.value,
             "chair": t.chair, "faculty": t.faculty}
            for t in store.list_teachers()
        ]

    @app.post(API_PREFIX + "/principals", status_code=201)
    def add_principal(body: PrincipalRequest, _: Principal = Depends(admin_only)):
        store.add_principal(body.principal_id, body.display_name, body.roles,
                            body.password, body.teacher_id)
        return {"principal_id": body.principal_id}

    # -- campaigns ----------------------------------------------------------------------

    @app.post(API_PREFIX + "/campaigns", status_code=201)
    def create_campaign(body: CampaignRequest, _: Principal = Depends(admin_only)):
        campaign = Campaign(
            campaign_id=body.campaign_id,
            semester=Semester(body.academic_year, body.term),
            scope=Scope(body.scope_level, body.scope_name),
            questionnaire_id=body.questionnaire_id or definition.questionnaire_id,
        )
        store.create_campaign(campaign)
        return _campaign_dict(campaign, (0, 0))

    @app.get(API_PREFIX + "/campaigns/{campaign_id}")
    def get_campaign(campaign_id: str, _: Principal = Depends(current_principal)):
        campaign = store.get_campaign(campaign_id)
        return _campaign_dict(campaign, store.campaign_counters(campaign_id))

    @app.get(API_PREFIX + "/campaigns/{campaign_id}/questionnaire")
    def get_questionnaire(campaign_id: str):
        # Public: students open this from their token link; item texts are not
        # confidential and the submission itself is gated by the token.
        store.get_campaign(campaign_id)
        return {
            "questionnaire_id": definition.questionnaire_id,
            "answer_labels": {str(k): v for k, v in ANSWER_LABELS.items()},
            "competencies": [
                {"competency": c.value, "label": c.label, "item_count": c.item_count}
                for c in Competency
            ],
            "items": [
                {"id": item.item_id, "text": item.text, "competency": item.competency.value}
                for item in definition.items
            ],
        }

    @app.post(API_PREFIX + "/campaigns/{campaign_id}/open")
    def open_campaign(campaign_id: str, body: OpenCampaignRequest,
                      _: Principal = Depends(admin_only)):
        campaign, tokens = service.open_campaign(
            store, campaign_id, definition, body.enrolled_students)
        return {"status": campaign.status.value, "tokens": tokens}

    @app.post(API_PREFIX + "/campaigns/{campaign_id}/close")
    def close_campaign(campaign_id: str, _: Principal = Depends(admin_only)):
        campaign = service.close_campaign(store, campaign_id, definition)
        return {"status": campaign.status.value}

    @app.post(API_PREFIX + "/campaigns/{campaign_id}/finalize")
    def finalize_campaign(campaign_id: str, _: Principal = Depends(admin_only)):
        campaign = service.finalize_campaign(store, campaign_id)
        return {"status": campaign.status.value}

    # -- sheet submission ------------------------------------------------------------------

    @app.post(API_PREFIX + "/campaigns/{campaign_id}/sheets", status_code=201)
    def submit_sheet(campaign_id: str, body: SheetRequest, request: Request):
        if body.source not in SHEET_SOURCES:
            raise OutOfRange("sheet source must be 'student' or 'self'")
        if body.source is EvaluationSource.SELF:
            # Self sheets ride the teacher's own session, not a token.
            session_token = request.headers.get("X-Session-Token")
            if not session_token:
                raise Unauthorized("self evaluation requires a session")
            principal = store.resolve_session(session_token)
            if principal.teacher_id != body.subject_teacher_id:
                raise Denied("teachers may only self-evaluate themselves")
        sheet = ResponseSheet(
            sheet_id=new_sheet_id(),
            campaign_id=campaign_id,
            questionnaire_id=definition.questionnaire_id,
            source=body.source,
            subject_teacher_id=body.subject_teacher_id,
            answers=body.answers,
        )
        store.store_sheet(sheet, definition, token=body.token,
                          enforce_token=body.source is EvaluationSource.STUDENT)
        return {"sheet_id": sheet.sheet_id, "status": "stored"}

    # -- collegial workflow ---------------------------------------------------------------------

    @app.post(API_PREFIX + "/collegial", status_code=201)
    def create_collegial(body: CollegialCreateRequest,
                         principal: Principal = Depends(chief_or_dean)):
        appointed_by = (AppointingRole.CHIEF_OF_STAFF
                        if Role.CHIEF_OF_STAFF in principal.roles else AppointingRole.DEAN)
        store.get_campaign(body.campaign_id)
        evaluation = appoint_collegial_evaluator(
            evaluation_id=body.evaluation_id or new_sheet_id(),
            campaign_id=body.campaign_id,
            evaluated_teacher_id=body.evaluated_teacher_id,
            evaluator_teacher_id=body.evaluator_teacher_id,
            appointed_by=appointed_by,
        )
        store.insert_collegial(evaluation)
        return _collegial_dict(evaluation)

    @app.get(API_PREFIX + "/collegial/{evaluation_id}")
    def get_collegial(evaluation_id: str, principal: Principal = Depends(current_principal)):
        evaluation = store.get_collegial(evaluation_id)
        participant = principal.teacher_id in (
            evaluation.evaluated_teacher_id, evaluation.evaluator_teacher_id)
        overseer = principal.roles & {Role.CHIEF_OF_STAFF, Role.DEAN, Role.RECTOR}
        if not participant and not overseer:
            raise Denied("collegial evaluations are visible to participants and overseers")
        return _collegial_dict(evaluation)

    @app.post(API_PREFIX + "/collegial/{evaluation_id}/consent")
    def consent(evaluation_id: str, body: ConsentRequest,
                principal: Principal = Depends(current_principal)):
        evaluation = store.get_collegial(evaluation_id)
        expected = (evaluation.evaluated_teacher_id if body.party is ConsentParty.EVALUATED
                    else evaluation.evaluator_teacher_id)
        if principal.teacher_id != expected:
            raise Denied("only the named party may answer for themselves")
        if body.granted:
            evaluation = grant_consent(evaluation, body.party)
        elif body.party is ConsentParty.EVALUATOR:
            evaluation = decline_evaluator(evaluation)
        else:
            raise Denied("participation is compulsory for the evaluated teacher")
        store.save_collegial(evaluation)
        return _collegial_dict(evaluation)

    @app.post(API_PREFIX + "/collegial/{evaluation_id}/advance")
    def advance(evaluation_id: str, body: AdvanceRequest,
                principal: Principal = Depends(current_principal)):
        evaluation = store.get_collegial(evaluation_id)
        if (principal.teacher_id != evaluation.evaluator_teacher_id
                and not principal.roles & {Role.CHIEF_OF_STAFF, Role.DEAN}):
            raise Denied("only the evaluator (or the appointing office) advances phases")
        evaluation = advance_phase(evaluation, body.notes)
        store.save_collegial(evaluation)
        if evaluation.phase is CollegialPhase.COMPLETE:
            service.store_collegial_result(store, evaluation_id)
        return _collegial_dict(evaluation)

    @app.post(API_PREFIX + "/collegial/{evaluation_id}/marks")
    def record_marks(evaluation_id: str, body: MarksRequest,
                     principal: Principal = Depends(current_principal)):
        evaluation = store.get_collegial(evaluation_id)
        if principal.teacher_id != evaluation.evaluator_teacher_id:
            raise Denied("only the appointed evaluator marks the criteria")
        evaluation = record_criteria_marks(evaluation, body.marks)
        store.save_collegial(evaluation)
        return _collegial_dict(evaluation)

    # -- chief assessment and final aggregation ------------------------------------------------------

    @app.put(API_PREFIX + "/teachers/{teacher_id}/chief-assessment")
    def put_chief_assessment(teacher_id: str, body: ChiefAssessmentRequest,
                             _: Principal = Depends(chief_or_dean)):
        teacher = store.get_teacher(teacher_id)
        store.get_campaign(body.campaign_id)
        assessment = make_chief_assessment(
            teacher_id, teacher.title, body.criterion_scores, weight_table)
        scores_by_name = {c.value: v for c, v in assessment.criterion_scores.items()}
        store.store_chief_assessment(
            teacher_id, body.campaign_id, teacher.title, scores_by_name,
            assessment.weighted_score)
        store.store_result(StoredResult(
            teacher_id=teacher_id,
            campaign_id=body.campaign_id,
            source=EvaluationSource.CHIEF,
            payload={
                "title": teacher.title.value,
                "criterion_scores": scores_by_name,
                "weighted_score": assessment.weighted_score,
            },
        ))
        return {
            "teacher_id": teacher_id,
            "campaign_id": body.campaign_id,
            "title": teacher.title.value,
            "weighted_score": assessment.weighted_score,
        }

    @app.post(API_PREFIX + "/teachers/{teacher_id}/final-evaluation")
    def compute_final(teacher_id: str, body: FinalEvaluationRequest,
                      _: Principal = Depends(chief_or_dean)):
        final = service.build_final_evaluation(store, teacher_id, body.campaign_id)
        return {
            "teacher_id": final.teacher_id,
            "campaign_id": final.campaign_id,
            "collegial": final.collegial.value,
            "chief_score": final.chief_score,
            "student_score": final.student_score,
            "self_score": final.self_score,
            "final_score": final.final_score,
            "final_qualificative": final.final_qualificative.value,
            "final_label": final.final_qualificative.label,
        }

    # -- confidential reads -----------------------------------------------------------------------------

    @app.get(API_PREFIX + "/results/{teacher_id}/{campaign_id}/{source}")
    def read_result(teacher_id: str, campaign_id: str, source: EvaluationSource,
                    principal: Principal = Depends(current_principal)):
        payload = store.read_result(principal, teacher_id, campaign_id, source)
        return {"teacher_id": teacher_id, "campaign_id": campaign_id,
                "source": source.value, "payload": payload}

    @app.get(API_PREFIX + "/statistics/{campaign_id}")
    def statistics(campaign_id: str,
                   grouping: GroupingLevel = Query(...),
                   name: str | None = Query(default=None),
                   principal: Principal = Depends(current_principal)):
        if not principal.roles & STATISTICS_ROLES:
            raise Denied("cohort statistics are limited to the quality commission, "
                         "dean and rector")
        stats = service.cohort_report(store, campaign_id, grouping, name)
        return {
            "campaign_id": campaign_id,
            "grouping": grouping.value,
            "name": name,
            "count": stats.count,
            "competencies": {
                c.value: {
                    "min": s.minimum, "max": s.maximum, "mean": s.mean, "count": s.count,
                }
                for c, s in stats.per_competency.items()
            },
        }

    @app.get(API_PREFIX + "/divergence/{teacher_id}/{campaign_id}")
    def divergence(teacher_id: str, campaign_id: str,
                   threshold: float | None = Query(default=None, gt=0),
                   principal: Principal = Depends(current_principal)):
        own = (principal.teacher_id == teacher_id and Role.TEACHER in principal.roles)
        if not own and not principal.roles & {Role.CHIEF_OF_STAFF, Role.DEAN, Role.RECTOR}:
            raise Denied("divergence reports are for the teacher and the debate chain")
        flags = service.divergence_report(
            store, teacher_id, campaign_id,
            threshold if threshold is not None else config.divergence_threshold)
        return {
            "teacher_id": teacher_id,
            "campaign_id": campaign_id,
            "threshold": threshold if threshold is not None else config.divergence_threshold,
            "flags": [{"competency": f.competency.value, "delta": f.delta} for f in flags],
            "debate_required": bool(flags),
        }

    return app


def serve(config: AppConfig) -> None:
    uvicorn.run(create_app(config), host=config.listen_host, port=config.listen_port)
