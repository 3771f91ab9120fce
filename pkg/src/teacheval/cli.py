"""Administrator command line: bootstrap, CSV import/export, cohort reports,
final evaluations and serving the API.

Exit codes: 0 success, 1 domain rule violation, 2 input or parse error.

CSV dialect (both directions): comma-separated UTF-8 with a mandatory header
``campaignId,a01,...,a58``; answers are integers 1..5 and the columns follow
the questionnaire's item order. Rows with any empty or invalid cell are
counted and skipped, mirroring the completeness gate.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import service
from .aggregation import default_weight_table, weight_table_to_yaml
from .config import AppConfig, config_template, load_config
from .core import Competency, EvaluationSource, GroupingLevel, ResponseSheet
from .errors import DomainError
from .questionnaire import default_questionnaire_text
from .storage import EvaluationStore, Role, new_sheet_id

CSV_HEADER = ["campaignId"] + [f"a{i:02d}" for i in range(1, 59)]


def _open_store(config: AppConfig) -> EvaluationStore:
    return EvaluationStore(config.storage_path)


def cmd_init(args: argparse.Namespace) -> int:
    target = Path(args.dir).resolve()
    target.mkdir(parents=True, exist_ok=True)
    db_path = target / "teacheval.db"
    (target / "config.yaml").write_text(
        config_template(str(db_path), str(target / "questionnaire.yaml"),
                        str(target / "weights.yaml")),
        encoding="utf-8")
    (target / "questionnaire.yaml").write_text(default_questionnaire_text(), encoding="utf-8")
    (target / "weights.yaml").write_text(
        "# Chief-of-staff criteria weights in percent; every title must sum to 100.\n"
        + weight_table_to_yaml(default_weight_table()),
        encoding="utf-8")
    store = EvaluationStore(db_path)
    if args.admin_password:
        store.add_principal("admin", "Administrator", [Role.ADMIN], args.admin_password)
    store.close()
    print(f"initialized {target} (config.yaml, questionnaire.yaml, weights.yaml, teacheval.db)")
    return 0


def _parse_csv(path: Path, campaign_id: str, source: EvaluationSource,
               teacher_id: str, definition) -> tuple[list[ResponseSheet], int]:
    """Returns (complete sheets, rejected row count). Header errors raise."""
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty CSV file") from None
        if header != CSV_HEADER:
            raise ValueError(
                f"bad header: expected {','.join(CSV_HEADER[:3])},...,{CSV_HEADER[-1]}")
        item_ids = definition.item_ids()
        sheets: list[ResponseSheet] = []
        rejected = 0
        for row in reader:
            if len(row) != len(CSV_HEADER) or row[0] != campaign_id:
                rejected += 1
                continue
            answers: dict[str, int] = {}
            for item_id, cell in zip(item_ids, row[1:]):
                cell = cell.strip()
                if not cell.lstrip("-").isdigit() or not 1 <= int(cell) <= 5:
                    break
                answers[item_id] = int(cell)
            if len(answers) != len(item_ids):
                rejected += 1
                continue
            sheets.append(ResponseSheet(
                sheet_id=new_sheet_id(),
                campaign_id=campaign_id,
                questionnaire_id=definition.questionnaire_id,
                source=source,
                subject_teacher_id=teacher_id,
                answers=answers,
            ))
    return sheets, rejected


def cmd_import(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    definition = config.load_questionnaire()
    path = Path(args.csv)
    try:
        sheets, rejected = _parse_csv(
            path, args.campaign, EvaluationSource(args.source), args.teacher, definition)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    store = _open_store(config)
    try:
        imported, rejected = store.import_sheets(
            sheets, definition,
            require_open=not args.force_closed,
            parse_rejected=rejected,
        )
    finally:
        store.close()
    print(f"imported={imported} rejected={rejected}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    definition = config.load_questionnaire()
    store = _open_store(config)
    try:
        rows = store.export_rows(args.campaign, definition)
    finally:
        store.close()
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
    print(f"exported {len(rows) - 1} sheet(s)", file=sys.stderr)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    store = _open_store(config)
    try:
        grouping = GroupingLevel(args.grouping)
        stats = service.cohort_report(store, args.campaign, grouping, args.name)
    finally:
        store.close()
    where = f"{grouping.value}" + (f' "{args.name}"' if args.name else "")
    print(f"Cohort report: campaign {args.campaign}, {where} ({stats.count} teacher(s))")
    for competency in Competency:
        s = stats.per_competency[competency]
        print(f"  {competency.label + ':':<20} between {s.minimum:.2f} and {s.maximum:.2f} "
              f"(mean {s.mean:.2f}, n={s.count})")
    return 0


def cmd_finalize(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    store = _open_store(config)
    try:
        final = service.build_final_evaluation(store, args.teacher, args.campaign)
    finally:
        store.close()
    rows = [
        ("1", "Fellow-like evaluation", final.collegial.label, "-"),
        ("2", "Chief of staff's evaluation", "-", f"{final.chief_score:.2f}"),
        ("3", "Student's evaluation", "-", f"{final.student_score:.2f}"),
        ("4", "Self evaluation", "-", f"{final.self_score:.2f}"),
    ]
    print(f"Final evaluation: teacher {args.teacher}, campaign {args.campaign}")
    print(f"{'No':<4}{'Criteria':<30}{'Qualificative':<15}{'Mark':<6}")
    for no, label, qualificative, mark in rows:
        print(f"{no:<4}{label:<30}{qualificative:<15}{mark:<6}")
    print(f"{'':<4}{'FINAL RESULT':<30}{final.final_qualificative.label:<15}"
          f"{final.final_score:.4f}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve  # deferred: uvicorn only needed here

    serve(load_config(args.config))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teacheval",
        description="Faculty evaluation: campaigns, questionnaire scoring, "
                    "collegial observations and final qualificatives.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="write config, questionnaire, weights and the database")
    p_init.add_argument("--dir", required=True, help="target directory")
    p_init.add_argument("--admin-password", help="create an 'admin' principal")
    p_init.set_defaults(func=cmd_init)

    p_import = sub.add_parser("import", help="batch-load a CSV response dump")
    p_import.add_argument("csv", help="CSV file (header campaignId,a01..a58)")
    p_import.add_argument("--config", required=True)
    p_import.add_argument("--campaign", required=True)
    p_import.add_argument("--teacher", required=True, help="evaluated teacher the rows belong to")
    p_import.add_argument("--source", choices=["student", "self"], default="student")
    p_import.add_argument("--force-closed", action="store_true",
                          help="allow historical loads into a closed campaign")
    p_import.set_defaults(func=cmd_import)

    p_export = sub.add_parser("export", help="dump anonymized sheets as CSV")
    p_export.add_argument("--config", required=True)
    p_export.add_argument("--campaign", required=True)
    p_export.add_argument("--output", "-o", help="output file (default stdout)")
    p_export.set_defaults(func=cmd_export)

    p_report = sub.add_parser("report", help="per-competency cohort statistics")
    p_report.add_argument("--config", required=True)
    p_report.add_argument("--campaign", required=True)
    p_report.add_argument("--grouping", choices=[g.value for g in GroupingLevel],
                          required=True)
    p_report.add_argument("--name", help="chair or faculty name (not used for university)")
    p_report.set_defaults(func=cmd_report)

    p_finalize = sub.add_parser("finalize", help="compute and print a final evaluation")
    p_finalize.add_argument("--config", required=True)
    p_finalize.add_argument("--campaign", required=True)
    p_finalize.add_argument("--teacher", required=True)
    p_finalize.set_defaults(func=cmd_finalize)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--config", required=True)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error [{exc.code}]: {exc.detail}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
