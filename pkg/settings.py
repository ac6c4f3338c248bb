"""
Reasoner configuration.

Values come from `.env` (python-dotenv), then HOCQA_* environment variables,
then explicit overrides; CLI flags are passed as overrides.
"""

import logging
import os
from enum import Enum
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)

ENV_PREFIX = "HOCQA_"


class OutputFormat(str, Enum):
    JSONL = "jsonl"
    TABLE = "table"


class ReasonerSettings(BaseModel):
    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    max_branches: int = Field(10_000, ge=1)
    oracle_atom_bound: int = Field(24, ge=1)
    oracle_candidate_bound: int = Field(4096, ge=1)
    order: str = "lexical"                 # "lexical" or a path to a ranking file
    include_internal: bool = False
    semantic_eq: bool = False
    all_branches: bool = False             # consistency saturates every branch instead of stopping at the first open one
    verbatim_theta: bool = False
    close_datatypes: bool = True
    log_level: str = "WARNING"
    output_format: OutputFormat = OutputFormat.JSONL

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value}")
        return value


def _from_environment() -> Dict[str, Any]:
    found = {}
    for name in ReasonerSettings.model_fields:
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            found[name] = raw
    return found


def load_settings(env_file: Optional[str] = None, **overrides: Any) -> ReasonerSettings:
    load_dotenv(env_file, override=False)
    values = _from_environment()
    values.update({k: v for k, v in overrides.items() if v is not None})
    settings = ReasonerSettings(**values)
    logger.debug("settings: %s", settings.model_dump())
    return settings
