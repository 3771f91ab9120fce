"""Durable storage: campaigns, sheets, evaluations, results, audit.

Backed by a single-file SQLite database behind a small store class, so a
server database can substitute without touching callers. Three rules are
enforced here rather than in callers:

* completeness gate: incomplete sheets are never written to the answers
  store (a rejection counter increments instead);
* anonymity: the sheets/answers tables have no respondent column at all and
  no foreign key into principals; submission tokens are stored only as
  salted hashes and cannot be linked back to a student;
* confidentiality: results are read through an access matrix keyed on role
  and source, and every access decision lands in an append-only audit log
  (append-only is enforced by triggers).

Schema (one statement per table below in ``_SCHEMA``):

    teachers(teacher_id, name, title, chair, faculty)
    principals(principal_id, display_name, roles, teacher_id,
               password_salt, password_hash)
    sessions(session_token, principal_id, expires_at)
    campaigns(campaign_id, academic_year, term, scope_level, scope_name,
              questionnaire_id, status, accepted_count, rejected_count,
              version)
    submission_tokens(token_id, campaign_id, salt, secret_hash, used)
    sheets(sheet_id, campaign_id, questionnaire_id, source,
           subject_teacher_id)
    sheet_answers(sheet_id, item_id, value)
    collegial_evaluations(... full state machine record, versioned)
    chief_assessments(teacher_id, campaign_id, title, criterion_scores,
                      weighted_score)
    results(teacher_id, campaign_id, source, payload, stored_at)
    audit_log(entry_id, at, principal_id, action, teacher_id, campaign_id,
              source, outcome)
    idempotency_cache(idem_key, fingerprint, status, content_type, body)
"""

from __future__ import annotations

import enum
import hashlib
import json
import secrets
import sqlite3
import threading
import time
import uuid
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .core import (
    EvaluationSource,
    GroupingLevel,
    Qualificative,
    QuestionnaireDefinition,
    ResponseSheet,
    Title,
    validate_sheet,
)
from .errors import (
    CampaignClosed,
    Denied,
    Incomplete,
    InvalidToken,
    NotFound,
    TokenReused,
    Unauthorized,
    UnknownTeacher,
    VersionConflict,
)
from .workflow import (
    Appointment,
    AppointingRole,
    Campaign,
    CampaignStatus,
    CollegialCriterion,
    CollegialEvaluation,
    CollegialPhase,
    Scope,
    Semester,
)

_PBKDF2_ITERATIONS = 100_000


class Role(enum.Enum):
    STUDENT = "student"
    TEACHER = "teacher"
    CHIEF_OF_STAFF = "chief_of_staff"
    DEAN = "dean"
    RECTOR = "rector"
    QUALITY_COMMISSION = "quality_commission"
    ADMIN = "admin"


@dataclass(frozen=True)
class Principal:
    principal_id: str
    display_name: str
    roles: frozenset[Role]
    teacher_id: str | None = None


@dataclass(frozen=True)
class Teacher:
    teacher_id: str
    name: str
    title: Title
    chair: str
    faculty: str


@dataclass(frozen=True)
class StoredResult:
    teacher_id: str
    campaign_id: str
    source: EvaluationSource
    payload: Mapping[str, object]
    stored_at: float = field(default_factory=time.time)


# Declared access truth table: which roles may read a result of each source
# for a teacher other than themselves. The evaluated teacher always reads
# their own results (any source); everyone else falls under this table.
# Student questionnaire results stay restricted to dean and rector; the chief
# of staff works with the self, collegial, chief and final tracks. The
# quality commission only ever sees anonymized aggregates (the statistics
# path), never an individual result, and admins administer without reading.
RESULT_ACCESS: dict[EvaluationSource, frozenset[Role]] = {
    EvaluationSource.STUDENT: frozenset({Role.DEAN, Role.RECTOR}),
    EvaluationSource.SELF: frozenset({Role.DEAN, Role.RECTOR, Role.CHIEF_OF_STAFF}),
    EvaluationSource.COLLEGIAL: frozenset({Role.DEAN, Role.RECTOR, Role.CHIEF_OF_STAFF}),
    EvaluationSource.CHIEF: frozenset({Role.DEAN, Role.RECTOR, Role.CHIEF_OF_STAFF}),
    EvaluationSource.FINAL: frozenset({Role.DEAN, Role.RECTOR, Role.CHIEF_OF_STAFF}),
}

#: Roles that may read anonymized cohort statistics.
STATISTICS_ROLES = frozenset({Role.QUALITY_COMMISSION, Role.DEAN, Role.RECTOR})


def can_read_result(principal: Principal, teacher_id: str, source: EvaluationSource) -> bool:
    """Decide result visibility from roles and identity alone."""
    if (
        principal.teacher_id is not None
        and principal.teacher_id == teacher_id
        and Role.TEACHER in principal.roles
    ):
        return True
    return bool(principal.roles & RESULT_ACCESS[source])


_SCHEMA = """
CREATE TABLE IF NOT EXISTS teachers(
    teacher_id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    title TEXT NOT NULL,
    chair TEXT NOT NULL,
    faculty TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS principals(
    principal_id TEXT PRIMARY KEY,
    display_name TEXT NOT NULL,
    roles TEXT NOT NULL,
    teacher_id TEXT,
    password_salt BLOB NOT NULL,
    password_hash BLOB NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions(
    session_token TEXT PRIMARY KEY,
    principal_id TEXT NOT NULL REFERENCES principals(principal_id),
    expires_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS campaigns(
    campaign_id TEXT PRIMARY KEY,
    academic_year TEXT NOT NULL,
    term INTEGER NOT NULL,
    scope_level TEXT NOT NULL,
    scope_name TEXT NOT NULL,
    questionnaire_id TEXT NOT NULL,
    status TEXT NOT NULL,
    accepted_count INTEGER NOT NULL DEFAULT 0,
    rejected_count INTEGER NOT NULL DEFAULT 0,
    version INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS submission_tokens(
    token_id TEXT PRIMARY KEY,
    campaign_id TEXT NOT NULL REFERENCES campaigns(campaign_id),
    salt BLOB NOT NULL,
    secret_hash BLOB NOT NULL,
    used INTEGER NOT NULL DEFAULT 0
);
-- Anonymity invariant: no respondent identity anywhere below this line.
CREATE TABLE IF NOT EXISTS sheets(
    sheet_id TEXT PRIMARY KEY,
    campaign_id TEXT NOT NULL REFERENCES campaigns(campaign_id),
    questionnaire_id TEXT NOT NULL,
    source TEXT NOT NULL CHECK(source IN ('student', 'self')),
    subject_teacher_id TEXT NOT NULL REFERENCES teachers(teacher_id)
);
CREATE TABLE IF NOT EXISTS sheet_answers(
    sheet_id TEXT NOT NULL REFERENCES sheets(sheet_id) ON DELETE CASCADE,
    item_id TEXT NOT NULL,
    value INTEGER NOT NULL CHECK(value BETWEEN 1 AND 5),
    PRIMARY KEY(sheet_id, item_id)
);
CREATE TABLE IF NOT EXISTS collegial_evaluations(
    evaluation_id TEXT PRIMARY KEY,
    campaign_id TEXT NOT NULL,
    evaluated_teacher_id TEXT NOT NULL,
    evaluator_teacher_id TEXT NOT NULL,
    appointed_by TEXT NOT NULL,
    evaluated_consent INTEGER NOT NULL DEFAULT 0,
    evaluator_consent INTEGER NOT NULL DEFAULT 0,
    phase TEXT NOT NULL,
    phase_notes TEXT NOT NULL DEFAULT '{}',
    criteria_marks TEXT NOT NULL DEFAULT '{}',
    result TEXT,
    voided INTEGER NOT NULL DEFAULT 0,
    version INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS chief_assessments(
    teacher_id TEXT NOT NULL,
    campaign_id TEXT NOT NULL,
    title TEXT NOT NULL,
    criterion_scores TEXT NOT NULL,
    weighted_score REAL NOT NULL,
    PRIMARY KEY(teacher_id, campaign_id)
);
CREATE TABLE IF NOT EXISTS results(
    teacher_id TEXT NOT NULL,
    campaign_id TEXT NOT NULL,
    source TEXT NOT NULL,
    payload TEXT NOT NULL,
    stored_at REAL NOT NULL,
    PRIMARY KEY(teacher_id, campaign_id, source)
);
CREATE TABLE IF NOT EXISTS audit_log(
    entry_id INTEGER PRIMARY KEY AUTOINCREMENT,
    at REAL NOT NULL,
    principal_id TEXT NOT NULL,
    action TEXT NOT NULL,
    teacher_id TEXT,
    campaign_id TEXT,
    source TEXT,
    outcome TEXT NOT NULL
);
CREATE TRIGGER IF NOT EXISTS audit_log_no_update
    BEFORE UPDATE ON audit_log
    BEGIN SELECT RAISE(ABORT, 'audit log is append-only'); END;
CREATE TRIGGER IF NOT EXISTS audit_log_no_delete
    BEFORE DELETE ON audit_log
    BEGIN SELECT RAISE(ABORT, 'audit log is append-only'); END;
CREATE TABLE IF NOT EXISTS idempotency_cache(
    idem_key TEXT NOT NULL,
    fingerprint TEXT NOT NULL,
    status INTEGER NOT NULL,
    content_type TEXT NOT NULL,
    body BLOB NOT NULL,
    PRIMARY KEY(idem_key, fingerprint)
);
"""


def _hash_password(password: str, salt: bytes) -> bytes:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _PBKDF2_ITERATIONS)


def _hash_token_secret(secret: str, salt: bytes) -> bytes:
    return hashlib.sha256(salt + secret.encode("ascii")).digest()


class EvaluationStore:
    """All persistent state behind one SQLite file (":memory:" works too)."""

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        with self._lock:
            self._conn.execute("PRAGMA foreign_keys = ON")
            if self.path != ":memory:":
                self._conn.execute("PRAGMA journal_mode = WAL")
                self._conn.execute("PRAGMA synchronous = NORMAL")
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    # -- principals and sessions ----------------------------------------

    def add_principal(
        self,
        principal_id: str,
        display_name: str,
        roles: Iterable[Role],
        password: str,
        teacher_id: str | None = None,
    ) -> Principal:
        role_set = frozenset(roles)
        if not role_set:
            raise ValueError("a principal needs at least one role")
        salt = secrets.token_bytes(16)
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO principals VALUES (?, ?, ?, ?, ?, ?)",
                (principal_id, display_name, ",".join(sorted(r.value for r in role_set)),
                 teacher_id, salt, _hash_password(password, salt)),
            )
            self._conn.commit()
        return Principal(principal_id, display_name, role_set, teacher_id)

    def get_principal(self, principal_id: str) -> Principal:
        row = self._conn.execute(
            "SELECT * FROM principals WHERE principal_id = ?", (principal_id,)).fetchone()
        if row is None:
            raise NotFound(f"no principal {principal_id!r}")
        return Principal(
            principal_id=row["principal_id"],
            display_name=row["display_name"],
            roles=frozenset(Role(r) for r in row["roles"].split(",")),
            teacher_id=row["teacher_id"],
        )

    def verify_credentials(self, principal_id: str, password: str) -> Principal:
        row = self._conn.execute(
            "SELECT * FROM principals WHERE principal_id = ?", (principal_id,)).fetchone()
        if row is None:
            raise Unauthorized("unknown principal or wrong password")
        if not secrets.compare_digest(_hash_password(password, row["password_salt"]),
                                      row["password_hash"]):
            raise Unauthorized("unknown principal or wrong password")
        return self.get_principal(principal_id)

    def create_session(self, principal_id: str, ttl_seconds: float) -> tuple[str, float]:
        token = secrets.token_urlsafe(32)
        expires_at = time.time() + ttl_seconds
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions VALUES (?, ?, ?)", (token, principal_id, expires_at))
            self._conn.commit()
        return token, expires_at

    def resolve_session(self, session_token: str) -> Principal:
        row = self._conn.execute(
            "SELECT * FROM sessions WHERE session_token = ?", (session_token,)).fetchone()
        if row is None:
            raise Unauthorized("unknown session")
        if row["expires_at"] < time.time():
            raise Unauthorized("session expired")
        return self.get_principal(row["principal_id"])

    # -- teachers ---------------------------------------------------------

    def add_teacher(self, teacher: Teacher) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO teachers VALUES (?, ?, ?, ?, ?)",
                (teacher.teacher_id, teacher.name, teacher.title.value,
                 teacher.chair, teacher.faculty),
            )
            self._conn.commit()

    def get_teacher(self, teacher_id: str) -> Teacher:
        row = self._conn.execute(
            "SELECT * FROM teachers WHERE teacher_id = ?", (teacher_id,)).fetchone()
        if row is None:
            raise UnknownTeacher(f"no teacher {teacher_id!r}")
        return Teacher(row["teacher_id"], row["name"], Title(row["title"]),
                       row["chair"], row["faculty"])

    def list_teachers(self, level: GroupingLevel | None = None, name: str | None = None) -> list[Teacher]:
        if level is None or level is GroupingLevel.UNIVERSITY:
            rows = self._conn.execute("SELECT * FROM teachers ORDER BY teacher_id").fetchall()
        elif level is GroupingLevel.FACULTY:
            rows = self._conn.execute(
                "SELECT * FROM teachers WHERE faculty = ? ORDER BY teacher_id", (name,)).fetchall()
        else:
            rows = self._conn.execute(
                "SELECT * FROM teachers WHERE chair = ? ORDER BY teacher_id", (name,)).fetchall()
        return [Teacher(r["teacher_id"], r["name"], Title(r["title"]), r["chair"], r["faculty"])
                for r in rows]

    # -- campaigns ----------------------------------------------------------

    def create_campaign(self, campaign: Campaign) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO campaigns (campaign_id, academic_year, term, scope_level, "
                "scope_name, questionnaire_id, status, version) VALUES (?,?,?,?,?,?,?,?)",
                (campaign.campaign_id, campaign.semester.academic_year, campaign.semester.term,
                 campaign.scope.level.value, campaign.scope.name, campaign.questionnaire_id,
                 campaign.status.value, campaign.version),
            )
            self._conn.commit()

    def get_campaign(self, campaign_id: str) -> Campaign:
        row = self._conn.execute(
            "SELECT * FROM campaigns WHERE campaign_id = ?", (campaign_id,)).fetchone()
        if row is None:
            raise NotFound(f"no campaign {campaign_id!r}")
        return Campaign(
            campaign_id=row["campaign_id"],
            semester=Semester(row["academic_year"], row["term"]),
            scope=Scope(GroupingLevel(row["scope_level"]), row["scope_name"]),
            questionnaire_id=row["questionnaire_id"],
            status=CampaignStatus(row["status"]),
            version=row["version"],
        )

    def save_campaign(self, campaign: Campaign) -> None:
        """Compare-and-set on the version written by the transition."""
        with self._lock:
            cur = self._conn.execute(
                "UPDATE campaigns SET status = ?, version = ? "
                "WHERE campaign_id = ? AND version = ?",
                (campaign.status.value, campaign.version,
                 campaign.campaign_id, campaign.version - 1),
            )
            self._conn.commit()
        if cur.rowcount != 1:
            raise VersionConflict(f"campaign {campaign.campaign_id} changed concurrently")

    def campaign_counters(self, campaign_id: str) -> tuple[int, int]:
        row = self._conn.execute(
            "SELECT accepted_count, rejected_count FROM campaigns WHERE campaign_id = ?",
            (campaign_id,)).fetchone()
        if row is None:
            raise NotFound(f"no campaign {campaign_id!r}")
        return row["accepted_count"], row["rejected_count"]

    # -- submission tokens -----------------------------------------------------

    def issue_tokens(self, campaign_id: str, count: int) -> list[str]:
        """Mint single-use tokens, one per enrolled student. The plain token
        is returned exactly once; only a salted hash is stored."""
        self.get_campaign(campaign_id)
        tokens: list[str] = []
        with self._lock:
            for _ in range(count):
                token_id = secrets.token_hex(4)
                secret = secrets.token_hex(16)  # 128-bit secret
                salt = secrets.token_bytes(16)
                self._conn.execute(
                    "INSERT INTO submission_tokens VALUES (?, ?, ?, ?, 0)",
                    (token_id, campaign_id, salt, _hash_token_secret(secret, salt)),
                )
                tokens.append(f"{token_id}.{secret}")
            self._conn.commit()
        return tokens

    def _check_token(self, campaign_id: str, token: str) -> str:
        """Validate a token against its stored hash; returns the token id."""
        token_id, dot, secret = token.partition(".")
        if not dot or not token_id or not secret:
            raise InvalidToken("malformed submission token")
        row = self._conn.execute(
            "SELECT * FROM submission_tokens WHERE token_id = ? AND campaign_id = ?",
            (token_id, campaign_id)).fetchone()
        if row is None:
            raise InvalidToken("unknown submission token")
        if not secrets.compare_digest(_hash_token_secret(secret, row["salt"]),
                                      row["secret_hash"]):
            raise InvalidToken("unknown submission token")
        if row["used"]:
            raise TokenReused("this submission token was already used")
        return token_id

    # -- sheets (the answers store) -----------------------------------------------

    def store_sheet(
        self,
        sheet: ResponseSheet,
        definition: QuestionnaireDefinition,
        token: str | None = None,
        require_open: bool = True,
        enforce_token: bool = True,
    ) -> str:
        """Validate and store one sheet; the completeness gate lives here.

        Student sheets require a fresh submission token (unless this is the
        trusted batch-import path, ``enforce_token=False``). Token consumption
        and sheet insertion happen in one transaction. Incomplete sheets are
        rejected, never written, and bump the campaign's rejection counter.
        """
        campaign = self.get_campaign(sheet.campaign_id)
        if require_open and campaign.status is not CampaignStatus.OPEN:
            raise CampaignClosed(
                f"campaign {campaign.campaign_id} is {campaign.status.value}, not open")
        self.get_teacher(sheet.subject_teacher_id)

        token_id: str | None = None
        if sheet.source is EvaluationSource.STUDENT and enforce_token:
            if token is None:
                raise InvalidToken("student sheets require a submission token")
            token_id = self._check_token(sheet.campaign_id, token)

        validation = validate_sheet(sheet, definition)
        if not validation.complete:
            with self._lock:
                self._conn.execute(
                    "UPDATE campaigns SET rejected_count = rejected_count + 1 "
                    "WHERE campaign_id = ?", (sheet.campaign_id,))
                self._conn.commit()
            raise Incomplete(missing_items=validation.missing_items)

        with self._lock:
            try:
                self._conn.execute("BEGIN IMMEDIATE")
                if token_id is not None:
                    cur = self._conn.execute(
                        "UPDATE submission_tokens SET used = 1 WHERE token_id = ? AND used = 0",
                        (token_id,))
                    if cur.rowcount != 1:
                        raise TokenReused("this submission token was already used")
                self._conn.execute(
                    "INSERT INTO sheets VALUES (?, ?, ?, ?, ?)",
                    (sheet.sheet_id, sheet.campaign_id, sheet.questionnaire_id,
                     sheet.source.value, sheet.subject_teacher_id),
                )
                self._conn.executemany(
                    "INSERT INTO sheet_answers VALUES (?, ?, ?)",
                    [(sheet.sheet_id, item_id, value) for item_id, value in sheet.answers.items()],
                )
                self._conn.execute(
                    "UPDATE campaigns SET accepted_count = accepted_count + 1 "
                    "WHERE campaign_id = ?", (sheet.campaign_id,))
                self._conn.commit()
            except BaseException:
                self._conn.rollback()
                raise
        return sheet.sheet_id

    def import_sheets(
        self,
        sheets: Sequence[ResponseSheet],
        definition: QuestionnaireDefinition,
        require_open: bool = True,
        parse_rejected: int = 0,
    ) -> tuple[int, int]:
        """Trusted batch path (CSV import): one transaction per file.

        Complete sheets are inserted, incomplete ones only counted; the
        campaign's counters include rows the caller already rejected while
        parsing. Returns (imported, rejected)."""
        if not sheets and parse_rejected == 0:
            return 0, 0
        campaign_ids = {s.campaign_id for s in sheets}
        if len(campaign_ids) > 1:
            raise ValueError(f"sheets span several campaigns: {sorted(campaign_ids)}")
        imported = 0
        rejected = parse_rejected
        with self._lock:
            try:
                self._conn.execute("BEGIN IMMEDIATE")
                for sheet in sheets:
                    campaign = self.get_campaign(sheet.campaign_id)
                    if require_open and campaign.status is not CampaignStatus.OPEN:
                        raise CampaignClosed(
                            f"campaign {campaign.campaign_id} is {campaign.status.value}, "
                            "not open (use the historical-load override)")
                    self.get_teacher(sheet.subject_teacher_id)
                    if not validate_sheet(sheet, definition).complete:
                        rejected += 1
                        continue
                    self._conn.execute(
                        "INSERT INTO sheets VALUES (?, ?, ?, ?, ?)",
                        (sheet.sheet_id, sheet.campaign_id, sheet.questionnaire_id,
                         sheet.source.value, sheet.subject_teacher_id),
                    )
                    self._conn.executemany(
                        "INSERT INTO sheet_answers VALUES (?, ?, ?)",
                        [(sheet.sheet_id, item_id, value)
                         for item_id, value in sheet.answers.items()],
                    )
                    imported += 1
                if campaign_ids:
                    campaign_id = next(iter(campaign_ids))
                    self._conn.execute(
                        "UPDATE campaigns SET accepted_count = accepted_count + ?, "
                        "rejected_count = rejected_count + ? WHERE campaign_id = ?",
                        (imported, rejected, campaign_id))
                self._conn.commit()
            except BaseException:
                self._conn.rollback()
                raise
        return imported, rejected

    def sheets_for(
        self,
        campaign_id: str,
        teacher_id: str | None = None,
        source: EvaluationSource | None = None,
    ) -> list[ResponseSheet]:
        query = "SELECT * FROM sheets WHERE campaign_id = ?"
        args: list[object] = [campaign_id]
        if teacher_id is not None:
            query += " AND subject_teacher_id = ?"
            args.append(teacher_id)
        if source is not None:
            query += " AND source = ?"
            args.append(source.value)
        rows = self._conn.execute(query + " ORDER BY sheet_id", args).fetchall()
        sheets = []
        for row in rows:
            answers = {
                a["item_id"]: a["value"]
                for a in self._conn.execute(
                    "SELECT item_id, value FROM sheet_answers WHERE sheet_id = ?",
                    (row["sheet_id"],))
            }
            sheets.append(ResponseSheet(
                sheet_id=row["sheet_id"],
                campaign_id=row["campaign_id"],
                questionnaire_id=row["questionnaire_id"],
                source=EvaluationSource(row["source"]),
                subject_teacher_id=row["subject_teacher_id"],
                answers=answers,
            ))
        return sheets

    def teachers_with_sheets(self, campaign_id: str, source: EvaluationSource) -> list[str]:
        rows = self._conn.execute(
            "SELECT DISTINCT subject_teacher_id FROM sheets "
            "WHERE campaign_id = ? AND source = ? ORDER BY subject_teacher_id",
            (campaign_id, source.value)).fetchall()
        return [r["subject_teacher_id"] for r in rows]

    def answers_digest(self, campaign_id: str) -> str:
        """Content hash of the answers store for one campaign.

        Covers what a sheet says (campaign, source, subject, answers), not
        the randomly assigned sheet ids, so two stores that received the
        same submissions by different routes hash identically.
        """
        sheets = self.sheets_for(campaign_id)
        canonical = sorted(
            (s.campaign_id, s.source.value, s.subject_teacher_id,
             tuple(sorted(s.answers.items())))
            for s in sheets
        )
        blob = json.dumps(canonical, separators=(",", ":")).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def export_rows(
        self, campaign_id: str, definition: QuestionnaireDefinition
    ) -> list[list[str]]:
        """Anonymized delimited export: header then one row per sheet with
        the campaign id and the 58 answers in questionnaire order."""
        header = ["campaignId"] + [f"a{i:02d}" for i in range(1, 59)]
        rows = [header]
        for sheet in self.sheets_for(campaign_id):
            rows.append([sheet.campaign_id]
                        + [str(sheet.answers[item.item_id]) for item in definition.items])
        return rows

    def purge_expired_sheets(self, retention_years: int, current_year: int) -> int:
        """Drop sheets of campaigns older than the academic year plus the
        retention window. Returns the number of sheets removed."""
        removed = 0
        with self._lock:
            for row in self._conn.execute(
                    "SELECT campaign_id, academic_year FROM campaigns").fetchall():
                end_year = int(row["academic_year"].split("/")[-1])
                if current_year > end_year + retention_years:
                    cur = self._conn.execute(
                        "DELETE FROM sheets WHERE campaign_id = ?", (row["campaign_id"],))
                    removed += cur.rowcount
            self._conn.commit()
        return removed

    # -- collegial evaluations ---------------------------------------------------

    def insert_collegial(self, evaluation: CollegialEvaluation) -> None:
        self.get_teacher(evaluation.evaluated_teacher_id)
        self.get_teacher(evaluation.evaluator_teacher_id)
        with self._lock:
            self._conn.execute(
                "INSERT INTO collegial_evaluations VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?)",
                self._collegial_row(evaluation),
            )
            self._conn.commit()

    def save_collegial(self, evaluation: CollegialEvaluation) -> None:
        """Compare-and-set against the version the transition started from."""
        row = self._collegial_row(evaluation)
        with self._lock:
            cur = self._conn.execute(
                "UPDATE collegial_evaluations SET campaign_id=?, evaluated_teacher_id=?, "
                "evaluator_teacher_id=?, appointed_by=?, evaluated_consent=?, "
                "evaluator_consent=?, phase=?, phase_notes=?, criteria_marks=?, result=?, "
                "voided=?, version=? WHERE evaluation_id=? AND version=?",
                row[1:] + (evaluation.evaluation_id, evaluation.version - 1),
            )
            self._conn.commit()
        if cur.rowcount != 1:
            raise VersionConflict(
                f"collegial evaluation {evaluation.evaluation_id} changed concurrently")

    @staticmethod
    def _collegial_row(evaluation: CollegialEvaluation) -> tuple:
        return (
            evaluation.evaluation_id,
            evaluation.campaign_id,
            evaluation.evaluated_teacher_id,
            evaluation.evaluator_teacher_id,
            evaluation.appointment.appointed_by.value,
            int(evaluation.appointment.evaluated_consent),
            int(evaluation.appointment.evaluator_consent),
            evaluation.phase.value,
            json.dumps({p.value: n for p, n in evaluation.phase_notes.items()}),
            json.dumps({c.value: m.value for c, m in evaluation.criteria_marks.items()}),
            evaluation.result.value if evaluation.result else None,
            int(evaluation.voided),
            evaluation.version,
        )

    def get_collegial(self, evaluation_id: str) -> CollegialEvaluation:
        row = self._conn.execute(
            "SELECT * FROM collegial_evaluations WHERE evaluation_id = ?",
            (evaluation_id,)).fetchone()
        if row is None:
            raise NotFound(f"no collegial evaluation {evaluation_id!r}")
        return CollegialEvaluation(
            evaluation_id=row["evaluation_id"],
            campaign_id=row["campaign_id"],
            evaluated_teacher_id=row["evaluated_teacher_id"],
            evaluator_teacher_id=row["evaluator_teacher_id"],
            appointment=Appointment(
                appointed_by=AppointingRole(row["appointed_by"]),
                evaluated_consent=bool(row["evaluated_consent"]),
                evaluator_consent=bool(row["evaluator_consent"]),
            ),
            phase=CollegialPhase(row["phase"]),
            phase_notes={CollegialPhase(p): n for p, n in json.loads(row["phase_notes"]).items()},
            criteria_marks={CollegialCriterion(c): Qualificative(m)
                            for c, m in json.loads(row["criteria_marks"]).items()},
            result=Qualificative(row["result"]) if row["result"] else None,
            voided=bool(row["voided"]),
            version=row["version"],
        )

    def collegial_for_teacher(self, campaign_id: str, teacher_id: str) -> CollegialEvaluation | None:
        row = self._conn.execute(
            "SELECT evaluation_id FROM collegial_evaluations "
            "WHERE campaign_id = ? AND evaluated_teacher_id = ? AND voided = 0 "
            "ORDER BY version DESC LIMIT 1",
            (campaign_id, teacher_id)).fetchone()
        return self.get_collegial(row["evaluation_id"]) if row else None

    # -- chief assessments ----------------------------------------------------------

    def store_chief_assessment(
        self,
        teacher_id: str,
        campaign_id: str,
        title: Title,
        criterion_scores: Mapping[str, float],
        weighted_score: float,
    ) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO chief_assessments VALUES (?,?,?,?,?)",
                (teacher_id, campaign_id, title.value,
                 json.dumps(dict(criterion_scores)), weighted_score),
            )
            self._conn.commit()

    def get_chief_assessment(self, teacher_id: str, campaign_id: str):
        row = self._conn.execute(
            "SELECT * FROM chief_assessments WHERE teacher_id = ? AND campaign_id = ?",
            (teacher_id, campaign_id)).fetchone()
        if row is None:
            return None
        return {
            "teacher_id": row["teacher_id"],
            "title": row["title"],
            "criterion_scores": json.loads(row["criterion_scores"]),
            "weighted_score": row["weighted_score"],
        }

    # -- results and the access matrix -------------------------------------------------

    def store_result(self, result: StoredResult) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO results VALUES (?,?,?,?,?)",
                (result.teacher_id, result.campaign_id, result.source.value,
                 json.dumps(dict(result.payload)), result.stored_at),
            )
            self._conn.commit()

    def get_result_payload(
        self, teacher_id: str, campaign_id: str, source: EvaluationSource
    ) -> dict | None:
        """Internal unchecked read, for the aggregation pipeline only."""
        row = self._conn.execute(
            "SELECT payload FROM results WHERE teacher_id = ? AND campaign_id = ? AND source = ?",
            (teacher_id, campaign_id, source.value)).fetchone()
        return json.loads(row["payload"]) if row else None

    def results_for_campaign(
        self, campaign_id: str, source: EvaluationSource
    ) -> dict[str, dict]:
        rows = self._conn.execute(
            "SELECT teacher_id, payload FROM results WHERE campaign_id = ? AND source = ?",
            (campaign_id, source.value)).fetchall()
        return {r["teacher_id"]: json.loads(r["payload"]) for r in rows}

    def read_result(
        self,
        principal: Principal,
        teacher_id: str,
        campaign_id: str,
        source: EvaluationSource,
    ) -> dict:
        """Confidential read: access matrix first, audit always."""
        granted = can_read_result(principal, teacher_id, source)
        self.append_audit(
            principal_id=principal.principal_id,
            action="read_result",
            teacher_id=teacher_id,
            campaign_id=campaign_id,
            source=source.value,
            outcome="granted" if granted else "denied",
        )
        if not granted:
            raise Denied(
                f"{source.value} results of teacher {teacher_id} are confidential")
        payload = self.get_result_payload(teacher_id, campaign_id, source)
        if payload is None:
            raise NotFound(
                f"no {source.value} result for teacher {teacher_id} in campaign {campaign_id}")
        return payload

    # -- audit log ------------------------------------------------------------------------

    def append_audit(
        self,
        principal_id: str,
        action: str,
        outcome: str,
        teacher_id: str | None = None,
        campaign_id: str | None = None,
        source: str | None = None,
    ) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO audit_log (at, principal_id, action, teacher_id, campaign_id, "
                "source, outcome) VALUES (?,?,?,?,?,?,?)",
                (time.time(), principal_id, action, teacher_id, campaign_id, source, outcome),
            )
            self._conn.commit()

    def audit_entries(self) -> list[dict]:
        rows = self._conn.execute("SELECT * FROM audit_log ORDER BY entry_id").fetchall()
        return [dict(r) for r in rows]

    # -- idempotency cache -------------------------------------------------------------------

    def idempotency_get(self, key: str, fingerprint: str) -> tuple[int, str, bytes] | None:
        row = self._conn.execute(
            "SELECT status, content_type, body FROM idempotency_cache "
            "WHERE idem_key = ? AND fingerprint = ?", (key, fingerprint)).fetchone()
        return (row["status"], row["content_type"], row["body"]) if row else None

    def idempotency_put(
        self, key: str, fingerprint: str, status: int, content_type: str, body: bytes
    ) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR IGNORE INTO idempotency_cache VALUES (?,?,?,?,?)",
                (key, fingerprint, status, content_type, body))
            self._conn.commit()

    # -- schema introspection (anonymity check lives on this surface) ---------------------------

    def table_columns(self, table: str) -> list[str]:
        return [r["name"] for r in self._conn.execute(f"PRAGMA table_info({table})")]

    def table_sql(self, table: str) -> str:
        row = self._conn.execute(
            "SELECT sql FROM sqlite_master WHERE type = 'table' AND name = ?", (table,)).fetchone()
        return row["sql"] if row else ""


def new_sheet_id() -> str:
    return uuid.uuid4().hex
