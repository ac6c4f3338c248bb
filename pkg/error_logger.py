"""
Error taxonomy and structured error logging for the reasoner.

Every failure the pipeline can surface is one of the ReasonerError subclasses
below; each carries an ErrorCategory that the CLI maps to an exit status.
KB inconsistency is a result, never an exception.
"""

from __future__ import annotations

import json
import logging
import time
import traceback
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence


class ErrorLevel(Enum):
    """Severity of a logged error"""
    CRITICAL = "CRITICAL"
    ERROR = "ERROR"
    WARNING = "WARNING"
    INFO = "INFO"
    DEBUG = "DEBUG"


class ErrorCategory(Enum):
    """Where in the pipeline an error originated"""
    INPUT = "INPUT"              # syntax, validation, sort mismatches
    TRANSLATION = "TRANSLATION"  # unsupported construct reaching theta
    NAMING = "NAMING"            # unmapped variable while decoding
    RESOURCE = "RESOURCE"        # branch budget, oracle bounds
    INTERNAL = "INTERNAL"


class DetailLevel(Enum):
    """How much of an error record reaches the log line"""
    MINIMAL = 1
    STANDARD = 2
    FORENSIC = 3


EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    end_line: Optional[int] = None
    end_column: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """Non-fatal finding from validation; ERROR severity blocks translation."""
    severity: Severity
    code: str
    message: str
    span: Optional[SourceSpan] = None

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.severity.value} [{self.code}] {self.message}"


class ReasonerError(Exception):
    category = ErrorCategory.INTERNAL
    exit_code = EXIT_INPUT

    def __init__(self, message: str, *, span: Optional[SourceSpan] = None,
                 context: Optional[Dict[str, Any]] = None):
        self.message = message
        self.span = span
        self.context = dict(context or {})
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


class InputError(ReasonerError):
    """Rejected input: syntax errors, ill-sorted terms or substitutions, bad files"""
    category = ErrorCategory.INPUT

    def __init__(self, message: str, *, span: Optional[SourceSpan] = None,
                 expected: Sequence[str] = (), context: Optional[Dict[str, Any]] = None):
        self.expected = tuple(sorted(expected))
        super().__init__(message, span=span, context=context)

    def __str__(self) -> str:
        text = super().__str__()
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text


class TranslationError(ReasonerError):
    category = ErrorCategory.TRANSLATION


class NamingError(ReasonerError):
    category = ErrorCategory.NAMING


class ResourceBoundError(ReasonerError):
    category = ErrorCategory.RESOURCE
    exit_code = EXIT_RESOURCE

    def __init__(self, resource: str, limit: int, observed: int):
        self.resource = resource
        self.limit = limit
        self.observed = observed
        super().__init__(f"{resource} bound exceeded: {observed} > {limit}",
                         context={"resource": resource, "limit": limit, "observed": observed})


class ReasonerErrorLogger:
    """
    Structured error logging with per-category routing and counters.
    Returns an error id for every logged record so CLI messages can cite it.
    """

    def __init__(self, app_name: str = "hocqa"):
        self.app_name = app_name
        self.session_id = f"{app_name}_{int(time.time())}"
        self.error_counts = {category.value: 0 for category in ErrorCategory}
        self.session_errors: List[Dict[str, Any]] = []
        self._loggers = {
            ErrorCategory.INPUT: logging.getLogger(f"{app_name}.input"),
            ErrorCategory.TRANSLATION: logging.getLogger(f"{app_name}.translate"),
            ErrorCategory.NAMING: logging.getLogger(f"{app_name}.decode"),
            ErrorCategory.RESOURCE: logging.getLogger(f"{app_name}.resource"),
            ErrorCategory.INTERNAL: logging.getLogger(f"{app_name}.main"),
        }

    def log_error(self,
                  message: str,
                  category: ErrorCategory,
                  level: ErrorLevel = ErrorLevel.ERROR,
                  detail_level: DetailLevel = DetailLevel.STANDARD,
                  context: Optional[Dict[str, Any]] = None,
                  exception: Optional[BaseException] = None) -> str:
        error_id = f"{category.value}_{len(self.session_errors):04d}"
        record: Dict[str, Any] = {
            "error_id": error_id,
            "session_id": self.session_id,
            "level": level.value,
            "category": category.value,
            "message": message,
        }
        if detail_level.value >= DetailLevel.STANDARD.value and context:
            record["context"] = context
        if exception is not None:
            record["exception"] = {"type": type(exception).__name__, "message": str(exception)}
            if detail_level == DetailLevel.FORENSIC:
                record["exception"]["traceback"] = traceback.format_exception(
                    type(exception), exception, exception.__traceback__)

        self.session_errors.append(record)
        self.error_counts[category.value] += 1

        log_method = getattr(self._loggers[category], level.value.lower())
        log_method(self._format(record, detail_level))
        return error_id

    def log_exception(self, error: ReasonerError, level: ErrorLevel = ErrorLevel.ERROR) -> str:
        context = dict(error.context)
        if error.span is not None:
            context["span"] = str(error.span)
        return self.log_error(error.message, error.category, level, context=context, exception=error)

    def _format(self, record: Dict[str, Any], detail_level: DetailLevel) -> str:
        base = f"[{record['error_id']}] {record['message']}"
        if detail_level == DetailLevel.MINIMAL or "context" not in record:
            return base
        return f"{base} | Context: {json.dumps(record['context'], default=str, sort_keys=True)}"

    def summary(self) -> Dict[str, Any]:
        return {
            "session_id": self.session_id,
            "total_errors": len(self.session_errors),
            "by_category": {k: v for k, v in self.error_counts.items() if v},
        }


error_logger = ReasonerErrorLogger()


def log_input_error(message: str, context: Optional[Dict[str, Any]] = None) -> str:
    return error_logger.log_error(message, ErrorCategory.INPUT, ErrorLevel.WARNING, context=context)


def log_resource_error(error: ResourceBoundError) -> str:
    return error_logger.log_exception(error, ErrorLevel.ERROR)
