from __future__ import annotations

import pytest
import yaml

from teacheval.core import Competency, TOTAL_ITEMS
from teacheval.errors import InvalidQuestionnaire
from teacheval.questionnaire import (
    default_questionnaire,
    default_questionnaire_text,
    load_questionnaire,
    parse_questionnaire,
)


def _as_data(definition) -> dict:
    return {
        "id": definition.questionnaire_id,
        "items": [
            {"id": item.item_id, "competency": item.competency.value, "text": item.text}
            for item in definition.items
        ],
    }


def test_packaged_bank_has_the_required_layout(definition):
    assert len(definition.items) == TOTAL_ITEMS
    by_competency = {c: len(definition.items_for(c)) for c in Competency}
    assert by_competency[Competency.SCIENTIFIC] == 12
    assert by_competency[Competency.PSYCHO_PEDAGOGICAL] == 20
    assert by_competency[Competency.PSYCHOSOCIAL] == 13
    assert by_competency[Competency.MANAGERIAL] == 13
    assert len({item.item_id for item in definition.items}) == TOTAL_ITEMS


def test_default_text_roundtrips(definition):
    parsed = parse_questionnaire(yaml.safe_load(default_questionnaire_text()))
    assert parsed == definition


def test_57_items_rejected(definition):
    data = _as_data(definition)
    data["items"].pop()
    with pytest.raises(InvalidQuestionnaire, match="58"):
        parse_questionnaire(data)


def test_duplicate_item_id_rejected(definition):
    data = _as_data(definition)
    data["items"][1]["id"] = data["items"][0]["id"]
    with pytest.raises(InvalidQuestionnaire, match="duplicate"):
        parse_questionnaire(data)


def test_wrong_competency_split_rejected(definition):
    data = _as_data(definition)
    # 58 items but 13/19/13/13: one pedagogical item relabeled scientific
    moved = next(i for i in data["items"] if i["competency"] == "psycho_pedagogical")
    moved["competency"] = "scientific"
    with pytest.raises(InvalidQuestionnaire):
        parse_questionnaire(data)


def test_unknown_competency_rejected(definition):
    data = _as_data(definition)
    data["items"][0]["competency"] = "artistic"
    with pytest.raises(InvalidQuestionnaire, match="artistic"):
        parse_questionnaire(data)


def test_missing_text_rejected(definition):
    data = _as_data(definition)
    data["items"][3]["text"] = "  "
    with pytest.raises(InvalidQuestionnaire):
        parse_questionnaire(data)


@pytest.mark.parametrize("data", [None, [], {"id": "x"}, {"items": []}, {"id": "", "items": []}])
def test_malformed_documents_rejected(data):
    with pytest.raises(InvalidQuestionnaire):
        parse_questionnaire(data)


def test_load_from_file(tmp_path, definition):
    path = tmp_path / "questionnaire.yaml"
    path.write_text(default_questionnaire_text(), encoding="utf-8")
    assert load_questionnaire(path) == definition


def test_load_missing_file(tmp_path):
    with pytest.raises(InvalidQuestionnaire, match="cannot read"):
        load_questionnaire(tmp_path / "nope.yaml")


def test_load_invalid_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("items: [unterminated", encoding="utf-8")
    with pytest.raises(InvalidQuestionnaire, match="YAML"):
        load_questionnaire(path)


def test_default_questionnaire_is_cacheable_per_call():
    assert default_questionnaire() == default_questionnaire()
