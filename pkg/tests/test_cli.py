from __future__ import annotations

import csv
import dataclasses
from pathlib import Path

import pytest

from conftest import make_answers
from teacheval import service
from teacheval.cli import CSV_HEADER, main
from teacheval.core import Competency, EvaluationSource, GroupingLevel, Title
from teacheval.questionnaire import load_questionnaire
from teacheval.aggregation import load_weight_table
from teacheval.storage import EvaluationStore, StoredResult, Teacher
from teacheval.workflow import Campaign, Scope, Semester, open_campaign


@dataclasses.dataclass
class CliEnv:
    root: Path
    config: Path
    db: Path

    def run(self, *argv: str) -> int:
        return main(list(argv))

    def open_store(self) -> EvaluationStore:
        return EvaluationStore(self.db)


@pytest.fixture
def env(tmp_path, definition) -> CliEnv:
    root = tmp_path / "deploy"
    assert main(["init", "--dir", str(root)]) == 0
    env = CliEnv(root=root, config=root / "config.yaml", db=root / "teacheval.db")
    store = env.open_store()
    store.add_teacher(Teacher("t1", "Teacher One", Title.PROFESSOR, "CS", "Sciences"))
    store.add_teacher(Teacher("t2", "Teacher Two", Title.INSTRUCTOR, "CS", "Sciences"))
    campaign = Campaign("camp-1", Semester("2024/2025", 1),
                        Scope(GroupingLevel.CHAIR, "CS"), definition.questionnaire_id)
    store.create_campaign(campaign)
    store.save_campaign(open_campaign(campaign, definition))
    store.close()
    return env


def write_csv(path: Path, rows: list[list[str]], header: list[str] | None = None) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header if header is not None else CSV_HEADER)
        writer.writerows(rows)


def csv_row(campaign_id: str, values: list[int | str]) -> list[str]:
    return [campaign_id] + [str(v) for v in values]


def test_init_writes_a_loadable_deployment(tmp_path, definition):
    root = tmp_path / "fresh"
    assert main(["init", "--dir", str(root), "--admin-password", "pw"]) == 0
    for name in ("config.yaml", "questionnaire.yaml", "weights.yaml", "teacheval.db"):
        assert (root / name).exists()
    assert load_questionnaire(root / "questionnaire.yaml") == definition
    load_weight_table(root / "weights.yaml")  # validates the 100-sum rule
    store = EvaluationStore(root / "teacheval.db")
    assert store.verify_credentials("admin", "pw").principal_id == "admin"
    store.close()


def test_import_stores_complete_rows(env, capsys):
    path = env.root / "dump.csv"
    write_csv(path, [csv_row("camp-1", [3] * 58) for _ in range(10)])
    assert env.run("import", str(path), "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 0
    assert "imported=10 rejected=0" in capsys.readouterr().out
    store = env.open_store()
    assert len(store.sheets_for("camp-1")) == 10
    store.close()


def test_import_skips_and_counts_bad_rows(env, capsys):
    short_row = csv_row("camp-1", [3] * 57)           # one column missing
    empty_cell = csv_row("camp-1", [3] * 57 + [""])   # empty answer
    off_scale = csv_row("camp-1", [3] * 57 + [9])     # outside 1..5
    wrong_campaign = csv_row("other", [3] * 58)
    good = csv_row("camp-1", [4] * 58)
    path = env.root / "dump.csv"
    write_csv(path, [short_row, empty_cell, off_scale, wrong_campaign, good])
    assert env.run("import", str(path), "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 0
    assert "imported=1 rejected=4" in capsys.readouterr().out


def test_import_with_malformed_header_writes_nothing(env, capsys):
    path = env.root / "dump.csv"
    write_csv(path, [csv_row("camp-1", [3] * 58)],
              header=["campaign"] + CSV_HEADER[1:])
    assert env.run("import", str(path), "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 2
    assert "bad header" in capsys.readouterr().err
    store = env.open_store()
    assert store.sheets_for("camp-1") == []
    store.close()


def test_import_requires_open_campaign_unless_forced(env, definition, capsys):
    store = env.open_store()
    service.close_campaign(store, "camp-1", definition)
    store.close()
    path = env.root / "dump.csv"
    write_csv(path, [csv_row("camp-1", [3] * 58)])
    base_args = ("import", str(path), "--config", str(env.config),
                 "--campaign", "camp-1", "--teacher", "t1")
    assert env.run(*base_args) == 1
    assert "CampaignClosed" in capsys.readouterr().err
    assert env.run(*base_args, "--force-closed") == 0


def test_export_import_roundtrip_preserves_content(env, tmp_path, definition, capsys):
    rows = [csv_row("camp-1", [((i + j) % 5) + 1 for j in range(58)]) for i in range(7)]
    source_csv = env.root / "dump.csv"
    write_csv(source_csv, rows)
    assert env.run("import", str(source_csv), "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 0
    exported = env.root / "export.csv"
    assert env.run("export", "--config", str(env.config),
                   "--campaign", "camp-1", "--output", str(exported)) == 0
    with exported.open(newline="", encoding="utf-8") as handle:
        reader = list(csv.reader(handle))
    assert reader[0] == CSV_HEADER
    assert len(reader) == 8

    # Re-import the export into a sibling deployment and compare content hashes.
    other_root = tmp_path / "other"
    assert main(["init", "--dir", str(other_root)]) == 0
    other = CliEnv(other_root, other_root / "config.yaml", other_root / "teacheval.db")
    store = other.open_store()
    store.add_teacher(Teacher("t1", "Teacher One", Title.PROFESSOR, "CS", "Sciences"))
    campaign = Campaign("camp-1", Semester("2024/2025", 1),
                        Scope(GroupingLevel.CHAIR, "CS"), definition.questionnaire_id)
    store.create_campaign(campaign)
    store.save_campaign(open_campaign(campaign, definition))
    store.close()
    assert other.run("import", str(exported), "--config", str(other.config),
                     "--campaign", "camp-1", "--teacher", "t1") == 0

    first, second = env.open_store(), other.open_store()
    assert first.answers_digest("camp-1") == second.answers_digest("camp-1")
    first.close()
    second.close()


def _sheets_with_scientific_sums(definition, sums: list[int]) -> list[dict[str, int]]:
    """Answer maps whose scientific means average to sum(sums)/(12*len)."""
    scientific = [item.item_id for item in definition.items_for(Competency.SCIENTIFIC)]
    maps = []
    for target in sums:
        answers = make_answers(definition, 4)
        base, extra = divmod(target, 12)
        for index, item_id in enumerate(scientific):
            answers[item_id] = base + (1 if index < extra else 0)
        assert sum(answers[i] for i in scientific) == target
        maps.append(answers)
    return maps


def test_report_reproduces_the_published_range_shape(env, definition, capsys):
    store = env.open_store()
    # Teacher means: 228/60 = 3.8 and 252/60 = 4.2 over five sheets each.
    for teacher, sums in (("t1", [46, 46, 46, 45, 45]), ("t2", [51, 51, 50, 50, 50])):
        for index, answers in enumerate(_sheets_with_scientific_sums(definition, sums)):
            from teacheval.core import ResponseSheet

            store.store_sheet(ResponseSheet(
                sheet_id=f"{teacher}-{index}", campaign_id="camp-1",
                questionnaire_id=definition.questionnaire_id,
                source=EvaluationSource.STUDENT, subject_teacher_id=teacher,
                answers=answers,
            ), definition, enforce_token=False)
    service.close_campaign(store, "camp-1", definition)
    store.close()
    assert env.run("report", "--config", str(env.config), "--campaign", "camp-1",
                   "--grouping", "chair", "--name", "CS") == 0
    out = capsys.readouterr().out
    assert "between 3.80 and 4.20" in out
    assert "2 teacher(s)" in out


def test_report_single_teacher_min_equals_max(env, definition, capsys):
    store = env.open_store()
    from teacheval.core import ResponseSheet

    store.store_sheet(ResponseSheet(
        sheet_id="only", campaign_id="camp-1",
        questionnaire_id=definition.questionnaire_id,
        source=EvaluationSource.STUDENT, subject_teacher_id="t1",
        answers=make_answers(definition, 4),
    ), definition, enforce_token=False)
    service.close_campaign(store, "camp-1", definition)
    store.close()
    assert env.run("report", "--config", str(env.config), "--campaign", "camp-1",
                   "--grouping", "university") == 0
    assert "between 4.00 and 4.00 (mean 4.00, n=1)" in capsys.readouterr().out


def test_report_refuses_open_campaign(env, capsys):
    assert env.run("report", "--config", str(env.config), "--campaign", "camp-1",
                   "--grouping", "chair", "--name", "CS") == 1
    assert "CampaignNotClosed" in capsys.readouterr().err


def seed_final_sources(env, chief: float, student: float, self_: float,
                       collegial: str) -> None:
    store = env.open_store()
    per_student = {c.value: student for c in Competency}
    per_self = {c.value: self_ for c in Competency}
    store.store_result(StoredResult("t1", "camp-1", EvaluationSource.STUDENT,
                                    {"per_competency": per_student, "overall": student,
                                     "sheet_count": 20}))
    store.store_result(StoredResult("t1", "camp-1", EvaluationSource.SELF,
                                    {"per_competency": per_self, "overall": self_,
                                     "sheet_count": 1}))
    store.store_result(StoredResult("t1", "camp-1", EvaluationSource.COLLEGIAL,
                                    {"result": collegial, "criteria_marks": {}}))
    store.store_result(StoredResult("t1", "camp-1", EvaluationSource.CHIEF,
                                    {"weighted_score": chief, "criterion_scores": {},
                                     "title": "professor"}))
    store.close()


def test_finalize_prints_the_four_source_table(env, capsys):
    seed_final_sources(env, chief=4.50, student=4.11, self_=4.20, collegial="very_good")
    assert env.run("finalize", "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 0
    out = capsys.readouterr().out
    assert "Fellow-like evaluation" in out
    assert "4.50" in out and "4.11" in out and "4.20" in out
    assert "FINAL RESULT" in out
    assert "Very Good" in out
    assert "4.3275" in out
    # the final evaluation is persisted as well
    store = env.open_store()
    payload = store.get_result_payload("t1", "camp-1", EvaluationSource.FINAL)
    store.close()
    assert payload["final_qualificative"] == "very_good"


def test_finalize_at_scale_minimum(env, capsys):
    seed_final_sources(env, chief=1.0, student=1.0, self_=1.0, collegial="very_poor")
    assert env.run("finalize", "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 0
    out = capsys.readouterr().out
    assert "FINAL RESULT" in out
    assert "Very Poor" in out


def test_finalize_lists_missing_sources(env, capsys):
    store = env.open_store()
    per = {c.value: 4.0 for c in Competency}
    store.store_result(StoredResult("t1", "camp-1", EvaluationSource.STUDENT,
                                    {"per_competency": per, "overall": 4.0,
                                     "sheet_count": 5}))
    store.close()
    assert env.run("finalize", "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 1
    err = capsys.readouterr().err
    assert "MissingSource" in err
    assert "chief" in err and "collegial" in err and "self" in err


def test_unknown_csv_file_is_an_input_error(env, capsys):
    assert env.run("import", str(env.root / "nope.csv"), "--config", str(env.config),
                   "--campaign", "camp-1", "--teacher", "t1") == 2
