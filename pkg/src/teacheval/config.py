"""Service configuration: one YAML file plus environment overrides.

Environment variables win over the file; both win over defaults::

    TEACHEVAL_LISTEN                 host:port
    TEACHEVAL_STORAGE_PATH           SQLite file
    TEACHEVAL_QUESTIONNAIRE_PATH     questionnaire definition YAML
    TEACHEVAL_WEIGHT_TABLE_PATH      weight table YAML
    TEACHEVAL_DIVERGENCE_THRESHOLD   float > 0
    TEACHEVAL_SESSION_TTL_MINUTES    int
    TEACHEVAL_RETENTION_YEARS        int
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from .aggregation import WeightTable, default_weight_table, load_weight_table
from .core import DEFAULT_DIVERGENCE_THRESHOLD, QuestionnaireDefinition
from .questionnaire import default_questionnaire, load_questionnaire


@dataclass(frozen=True)
class AppConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8675
    storage_path: str = "teacheval.db"
    questionnaire_path: str | None = None  # None -> packaged placeholder bank
    weight_table_path: str | None = None   # None -> built-in default table
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD
    session_ttl_minutes: int = 720
    retention_years: int = 1

    def load_questionnaire(self) -> QuestionnaireDefinition:
        if self.questionnaire_path:
            return load_questionnaire(self.questionnaire_path)
        return default_questionnaire()

    def load_weight_table(self) -> WeightTable:
        if self.weight_table_path:
            return load_weight_table(self.weight_table_path)
        return default_weight_table()


def _apply_env(config: AppConfig, env: dict[str, str]) -> AppConfig:
    if "TEACHEVAL_LISTEN" in env:
        host, _, port = env["TEACHEVAL_LISTEN"].rpartition(":")
        config = replace(config, listen_host=host or config.listen_host,
                         listen_port=int(port))
    if "TEACHEVAL_STORAGE_PATH" in env:
        config = replace(config, storage_path=env["TEACHEVAL_STORAGE_PATH"])
    if "TEACHEVAL_QUESTIONNAIRE_PATH" in env:
        config = replace(config, questionnaire_path=env["TEACHEVAL_QUESTIONNAIRE_PATH"])
    if "TEACHEVAL_WEIGHT_TABLE_PATH" in env:
        config = replace(config, weight_table_path=env["TEACHEVAL_WEIGHT_TABLE_PATH"])
    if "TEACHEVAL_DIVERGENCE_THRESHOLD" in env:
        config = replace(config, divergence_threshold=float(env["TEACHEVAL_DIVERGENCE_THRESHOLD"]))
    if "TEACHEVAL_SESSION_TTL_MINUTES" in env:
        config = replace(config, session_ttl_minutes=int(env["TEACHEVAL_SESSION_TTL_MINUTES"]))
    if "TEACHEVAL_RETENTION_YEARS" in env:
        config = replace(config, retention_years=int(env["TEACHEVAL_RETENTION_YEARS"]))
    return config


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> AppConfig:
    """Read the config file (if given) and apply environment overrides."""
    config = AppConfig()
    if path is not None:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must be a YAML mapping")
        listen = data.get("listen")
        if listen:
            host, _, port = str(listen).rpartition(":")
            config = replace(config, listen_host=host or config.listen_host,
                             listen_port=int(port))
        for key in ("storage_path", "questionnaire_path", "weight_table_path"):
            if data.get(key) is not None:
                config = replace(config, **{key: str(data[key])})
        if data.get("divergence_threshold") is not None:
            config = replace(config, divergence_threshold=float(data["divergence_threshold"]))
        if data.get("session_ttl_minutes") is not None:
            config = replace(config, session_ttl_minutes=int(data["session_ttl_minutes"]))
        if data.get("retention_years") is not None:
            config = replace(config, retention_years=int(data["retention_years"]))
    return _apply_env(config, dict(os.environ) if env is None else env)


def config_template(
    storage_path: str = "teacheval.db",
    questionnaire_path: str = "questionnaire.yaml",
    weight_table_path: str = "weights.yaml",
) -> str:
    return (
        "# teacheval service configuration\n"
        "listen: 127.0.0.1:8675\n"
        f"storage_path: {storage_path}\n"
        f"questionnaire_path: {questionnaire_path}\n"
        f"weight_table_path: {weight_table_path}\n"
        "divergence_threshold: 0.5\n"
        "session_ttl_minutes: 720\n"
        "retention_years: 1\n"
    )
