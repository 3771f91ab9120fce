"""Domain error hierarchy.

Every concrete error carries a stable wire-level ``code`` and the HTTP status
the API layer maps it to. The set of codes is the published error catalog;
:func:`error_catalog` is the single source of truth the contract test checks
against (codes must stay a bijection with the classes).
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for every rule violation raised by this package."""

    code = "DomainError"
    http_status = 400

    def __init__(self, detail: str = "", **context: object):
        self.detail = detail or self.code
        self.context = {k: v for k, v in context.items() if v is not None}
        super().__init__(self.detail)


# -- questionnaire and scoring ------------------------------------------------

class QuestionnaireMismatch(DomainError):
    """Sheet references a different questionnaire than the one supplied."""
    code = "QuestionnaireMismatch"
    http_status = 422


class UnknownItem(DomainError):
    """Sheet answers an item id that does not exist in the questionnaire."""
    code = "UnknownItem"
    http_status = 422


class Incomplete(DomainError):
    """Sheet is missing answers, or has answers outside the 1..5 scale."""
    code = "Incomplete"
    http_status = 422

    def __init__(self, detail: str = "", missing_items: tuple[str, ...] = (), **context: object):
        self.missing_items = tuple(missing_items)
        super().__init__(detail or f"{len(self.missing_items)} item(s) missing or invalid",
                         missing_items=list(self.missing_items), **context)


class OutOfRange(DomainError):
    """Numeric score outside the range the operation accepts."""
    code = "OutOfRange"
    http_status = 422


class EmptyCohort(DomainError):
    """Statistics requested over an empty group."""
    code = "EmptyCohort"
    http_status = 422


class InvalidQuestionnaire(DomainError):
    """Questionnaire definition violates the 58-item / per-competency layout."""
    code = "InvalidQuestionnaire"
    http_status = 422


# -- campaign lifecycle --------------------------------------------------------

class AlreadyOpen(DomainError):
    """Campaign is already accepting sheets."""
    code = "AlreadyOpen"
    http_status = 409


class InvalidTransition(DomainError):
    """Requested campaign or record state change is not a forward step."""
    code = "InvalidTransition"
    http_status = 409


class CampaignClosed(DomainError):
    """Sheet submitted while the campaign is not open."""
    code = "CampaignClosed"
    http_status = 409


class CampaignNotClosed(DomainError):
    """Report or finalization requested before the campaign closed."""
    code = "CampaignNotClosed"
    http_status = 409


# -- collegial workflow ---------------------------------------------------------

class SelfEvaluationForbidden(DomainError):
    """A teacher cannot be appointed to observe their own lesson."""
    code = "SelfEvaluationForbidden"
    http_status = 422


class UnknownTeacher(DomainError):
    """Referenced teacher id is not registered."""
    code = "UnknownTeacher"
    http_status = 404


class ConsentMissing(DomainError):
    """Cannot leave pre-observation before both parties consented."""
    code = "ConsentMissing"
    http_status = 409


class AlreadyComplete(DomainError):
    """Collegial evaluation has already reached its final phase."""
    code = "AlreadyComplete"
    http_status = 409


class EmptyNotes(DomainError):
    """Each phase ends with a discussion; its notes must not be empty."""
    code = "EmptyNotes"
    http_status = 422


class RecordVoided(DomainError):
    """Collegial record was voided by the evaluator declining to take part."""
    code = "RecordVoided"
    http_status = 409


class MissingCriteria(DomainError):
    """Collegial finalization attempted before all four criteria were marked."""
    code = "MissingCriteria"
    http_status = 422


# -- chief scoring and final aggregation ----------------------------------------

class MissingCriterion(DomainError):
    """Chief assessment is missing one of the seven criteria."""
    code = "MissingCriterion"
    http_status = 422


class InvalidWeights(DomainError):
    """Weight table row does not sum to 100, or a cell is out of range."""
    code = "InvalidWeights"
    http_status = 422


class MissingSource(DomainError):
    """Final evaluation requested before all four source marks exist."""
    code = "MissingSource"
    http_status = 409

    def __init__(self, detail: str = "", missing_sources: tuple[str, ...] = (), **context: object):
        self.missing_sources = tuple(missing_sources)
        super().__init__(detail or "missing sources: " + ", ".join(self.missing_sources),
                         missing_sources=list(self.missing_sources), **context)


# -- storage and access ----------------------------------------------------------

class TokenReused(DomainError):
    """Submission token was already consumed."""
    code = "TokenReused"
    http_status = 409


class InvalidToken(DomainError):
    """Submission token is unknown or malformed."""
    code = "InvalidToken"
    http_status = 401


class Denied(DomainError):
    """Principal is not allowed to read this result."""
    code = "Denied"
    http_status = 403


class NotFound(DomainError):
    """Referenced record does not exist."""
    code = "NotFound"
    http_status = 404


class VersionConflict(DomainError):
    """Concurrent update detected; reload the record and retry."""
    code = "VersionConflict"
    http_status = 409


class Unauthorized(DomainError):
    """Missing, invalid or expired session."""
    code = "Unauthorized"
    http_status = 401


def error_catalog() -> dict[str, type[DomainError]]:
    """All concrete error classes keyed by wire code."""
    catalog: dict[str, type[DomainError]] = {}
    stack = list(DomainError.__subclasses__())
    while stack:
        cls = stack.pop()
        catalog[cls.code] = cls
        stack.extend(cls.__subclasses__())
    return catalog
