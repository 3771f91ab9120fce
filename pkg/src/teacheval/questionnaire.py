"""Questionnaire definition file handling.

The definition is a YAML document::

    id: standard-58
    items:
      - id: sci-01
        competency: scientific
        text: "Demonstrates thorough command of the course subject matter."
      ...

Exactly 58 items are required, split 12/20/13/13 over the competencies
scientific / psycho_pedagogical / psychosocial / managerial, with unique ids.
A placeholder bank with that layout ships with the package; deployments
replace it by pointing the config at their own file.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import yaml

from .core import Competency, QuestionnaireDefinition, QuestionnaireItem
from .errors import InvalidQuestionnaire

_DEFAULT_RESOURCE = "questionnaire.yaml"


def parse_questionnaire(data: object) -> QuestionnaireDefinition:
    """Build a definition from already-parsed YAML/JSON data."""
    if not isinstance(data, dict):
        raise InvalidQuestionnaire("definition must be a mapping with 'id' and 'items'")
    questionnaire_id = data.get("id")
    if not isinstance(questionnaire_id, str) or not questionnaire_id:
        raise InvalidQuestionnaire("definition needs a non-empty string 'id'")
    raw_items = data.get("items")
    if not isinstance(raw_items, list):
        raise InvalidQuestionnaire("definition needs an 'items' list")

    items: list[QuestionnaireItem] = []
    for position, raw in enumerate(raw_items, start=1):
        if not isinstance(raw, dict):
            raise InvalidQuestionnaire(f"item #{position} is not a mapping")
        item_id = raw.get("id")
        text = raw.get("text")
        competency_name = raw.get("competency")
        if not isinstance(item_id, str) or not item_id:
            raise InvalidQuestionnaire(f"item #{position} needs a non-empty 'id'")
        if not isinstance(text, str) or not text.strip():
            raise InvalidQuestionnaire(f"item {item_id!r} needs a non-empty 'text'")
        try:
            competency = Competency(competency_name)
        except ValueError:
            raise InvalidQuestionnaire(
                f"item {item_id!r} has unknown competency {competency_name!r}") from None
        items.append(QuestionnaireItem(item_id=item_id, text=text.strip(), competency=competency))

    # QuestionnaireDefinition enforces the 58-item / 12-20-13-13 layout itself.
    return QuestionnaireDefinition(questionnaire_id=questionnaire_id, items=tuple(items))


def load_questionnaire(path: str | Path) -> QuestionnaireDefinition:
    """Load and validate a questionnaire definition file."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidQuestionnaire(f"cannot read questionnaire file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise InvalidQuestionnaire(f"questionnaire file {path} is not valid YAML: {exc}") from exc
    return parse_questionnaire(data)


def default_questionnaire() -> QuestionnaireDefinition:
    """The packaged placeholder bank (valid layout, generic item texts)."""
    raw = resources.files("teacheval.data").joinpath(_DEFAULT_RESOURCE).read_text(encoding="utf-8")
    return parse_questionnaire(yaml.safe_load(raw))


def default_questionnaire_text() -> str:
    """Raw YAML of the packaged bank, for ``teacheval init`` to copy out."""
    return resources.files("teacheval.data").joinpath(_DEFAULT_RESOURCE).read_text(encoding="utf-8")
