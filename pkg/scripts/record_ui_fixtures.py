#!/usr/bin/env python3
"""Record API response fixtures for the browser client's tests.

Drives the real service in-process (storage, scoring, workflow and HTTP layer
all live) and freezes selected responses as JSON under
frontend/tests/fixtures/. Rerun after changing the API surface:

    python3 scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from teacheval.aggregation import default_weight_table
from teacheval.api import create_app
from teacheval.config import AppConfig
from teacheval.core import Competency, EvaluationSource, Title
from teacheval.questionnaire import default_questionnaire
from teacheval.storage import EvaluationStore, Role, StoredResult, Teacher

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

PERSONAS = {
    "admin": ([Role.ADMIN], None),
    "dean": ([Role.DEAN], None),
    "chief": ([Role.CHIEF_OF_STAFF], None),
    "commission": ([Role.QUALITY_COMMISSION], None),
    "teacher1": ([Role.TEACHER], "t1"),
    "teacher2": ([Role.TEACHER], "t2"),
    "teacher3": ([Role.TEACHER], "t3"),
}


def record(name: str, response) -> dict:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    body = response.json()
    document = {"status": response.status_code, "body": body}
    (FIXTURES / f"{name}.json").write_text(
        json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"recorded {name}.json ({response.status_code})")
    return body


def scores_payload(value: float, sheets: int) -> dict:
    return {
        "per_competency": {c.value: value for c in Competency},
        "overall": value,
        "sheet_count": sheets,
    }


def main() -> int:
    definition = default_questionnaire()
    with tempfile.TemporaryDirectory() as workdir:
        store = EvaluationStore(Path(workdir) / "fixtures.db")
        for teacher_id, title in (("t1", Title.PROFESSOR), ("t2", Title.INSTRUCTOR),
                                  ("t3", Title.ASSOCIATE_PROFESSOR)):
            store.add_teacher(Teacher(teacher_id, f"Teacher {teacher_id[1]}", title,
                                      "CS", "Sciences"))
        headers = {}
        for name, (roles, teacher_id) in PERSONAS.items():
            store.add_principal(name, name.title(), roles, "pw", teacher_id)
            token, _ = store.create_session(name, ttl_seconds=3600)
            headers[name] = {"X-Session-Token": token}

        client = TestClient(create_app(config=AppConfig(), store=store,
                                       definition=definition,
                                       weight_table=default_weight_table()),
                            raise_server_exceptions=False)

        client.post("/api/v1/campaigns", headers=headers["admin"], json={
            "campaign_id": "camp-1", "academic_year": "2024/2025", "term": 1,
            "scope_level": "chair", "scope_name": "CS"}).raise_for_status()
        tokens = client.post("/api/v1/campaigns/camp-1/open", headers=headers["admin"],
                             json={"enrolled_students": 3}).json()["tokens"]

        record("questionnaire", client.get("/api/v1/campaigns/camp-1/questionnaire"))

        item_ids = [item.item_id for item in definition.items]
        full = {item_id: 4 for item_id in item_ids}
        record("submit_complete", client.post("/api/v1/campaigns/camp-1/sheets", json={
            "source": "student", "subject_teacher_id": "t1",
            "answers": full, "token": tokens[0]}))
        record("submit_token_reused", client.post("/api/v1/campaigns/camp-1/sheets", json={
            "source": "student", "subject_teacher_id": "t1",
            "answers": full, "token": tokens[0]}))
        partial = dict(list(full.items())[:-1])
        record("submit_incomplete", client.post("/api/v1/campaigns/camp-1/sheets", json={
            "source": "student", "subject_teacher_id": "t1",
            "answers": partial, "token": tokens[1]}))

        client.post("/api/v1/campaigns/camp-1/close",
                    headers=headers["admin"]).raise_for_status()

        # Published worked example for t1; range endpoints on t2/t3 for the
        # cohort fixture (the statistics view spans 3.80 .. 4.20).
        store.store_result(StoredResult("t1", "camp-1", EvaluationSource.STUDENT,
                                        scores_payload(4.11, 30)))
        store.store_result(StoredResult("t1", "camp-1", EvaluationSource.SELF,
                                        scores_payload(4.20, 1)))
        store.store_result(StoredResult("t1", "camp-1", EvaluationSource.COLLEGIAL,
                                        {"result": "very_good", "criteria_marks": {
                                            "teaching_activity_content": "very_good",
                                            "lesson_organization_presentation": "very_good",
                                            "lesson_clarity": "very_good",
                                            "connection_to_students": "very_good"},
                                         "evaluation_id": "seed"}))
        store.store_result(StoredResult("t1", "camp-1", EvaluationSource.CHIEF,
                                        {"weighted_score": 4.50, "title": "professor",
                                         "criterion_scores": {}}))
        store.store_result(StoredResult("t2", "camp-1", EvaluationSource.STUDENT,
                                        scores_payload(3.80, 12)))
        store.store_result(StoredResult("t3", "camp-1", EvaluationSource.STUDENT,
                                        scores_payload(4.20, 17)))

        record("final_post", client.post("/api/v1/teachers/t1/final-evaluation",
                                         headers=headers["chief"],
                                         json={"campaign_id": "camp-1"}))
        for source in ("final", "student", "self", "collegial", "chief"):
            record(f"result_{source}", client.get(f"/api/v1/results/t1/camp-1/{source}",
                                                  headers=headers["teacher1"]))
        record("result_denied", client.get("/api/v1/results/t1/camp-1/student",
                                           headers=headers["teacher2"]))
        record("statistics", client.get("/api/v1/statistics/camp-1",
                                        params={"grouping": "chair", "name": "CS"},
                                        headers=headers["commission"]))

        created = record("collegial_created", client.post(
            "/api/v1/collegial", headers=headers["chief"],
            json={"campaign_id": "camp-1", "evaluated_teacher_id": "t2",
                  "evaluator_teacher_id": "t3", "evaluation_id": "ce-fixture"}))
        evaluation_id = created["evaluation_id"]
        client.post(f"/api/v1/collegial/{evaluation_id}/consent",
                    headers=headers["teacher2"],
                    json={"party": "evaluated", "granted": True}).raise_for_status()
        record("collegial_consented", client.post(
            f"/api/v1/collegial/{evaluation_id}/consent", headers=headers["teacher3"],
            json={"party": "evaluator", "granted": True}))
        record("collegial_observation", client.post(
            f"/api/v1/collegial/{evaluation_id}/advance", headers=headers["teacher3"],
            json={"notes": "agreed on the lesson and the schedule"}))
        record("collegial_post", client.post(
            f"/api/v1/collegial/{evaluation_id}/advance", headers=headers["teacher3"],
            json={"notes": "observed the full lecture"}))
        record("collegial_marked", client.post(
            f"/api/v1/collegial/{evaluation_id}/marks", headers=headers["teacher3"],
            json={"marks": {"teaching_activity_content": "very_good",
                            "lesson_organization_presentation": "very_good",
                            "lesson_clarity": "good",
                            "connection_to_students": "good"}}))
        record("collegial_complete", client.post(
            f"/api/v1/collegial/{evaluation_id}/advance", headers=headers["teacher3"],
            json={"notes": "discussed conclusions and improvement ideas"}))
        store.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
