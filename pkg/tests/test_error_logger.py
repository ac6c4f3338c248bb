import io
import logging

import pytest

from error_logger import (
    ErrorCategory,
    InputError,
    ReasonerErrorLogger,
    ResourceBoundError,
    SourceSpan,
    log_input_error,
)
from logging_setup import TRACE_LOGGER, configure_logging, enable_trace
from traced import traced


def test_input_error_text():
    error = InputError("unexpected ';'", span=SourceSpan(2, 5), expected=["NAME", "'('"])
    assert str(error) == "2:5: unexpected ';' (expected one of: '(', NAME)"
    assert error.exit_code == 2


def test_log_exception_returns_ids():
    log = ReasonerErrorLogger("test")
    first = log.log_exception(InputError("bad", span=SourceSpan(1, 1)))
    second = log.log_exception(ResourceBoundError("branches", 2, 3))
    assert first == "INPUT_0000"
    assert second == "RESOURCE_0001"
    assert log.session_errors[0]["context"] == {"span": "1:1"}
    assert log.summary()["by_category"] == {"INPUT": 1, "RESOURCE": 1}


def test_log_error_writes_context(caplog):
    log = ReasonerErrorLogger("test")
    with caplog.at_level(logging.ERROR, logger="test.translate"):
        log.log_error("unsupported", ErrorCategory.TRANSLATION, context={"construct": "Self"})
    assert '"construct": "Self"' in caplog.text


def test_traced_keeps_elapsed_and_reraises():
    with traced("stage") as t:
        pass
    assert t.elapsed >= 0.0
    with pytest.raises(ValueError):
        with traced("failing"):
            raise ValueError("boom")


@pytest.fixture
def restore_loggers():
    root = logging.getLogger()
    trace = logging.getLogger(TRACE_LOGGER)
    saved = (list(root.handlers), root.level, list(trace.handlers), trace.level, trace.propagate)
    yield
    root.handlers[:] = saved[0]
    root.setLevel(saved[1])
    trace.handlers[:] = saved[2]
    trace.setLevel(saved[3])
    trace.propagate = saved[4]


def test_configure_logging_uses_one_handler(restore_loggers):
    stream = io.StringIO()
    configure_logging("info", stream)
    root = configure_logging("info", stream)
    assert len(root.handlers) == 1
    assert root.level == logging.INFO
    logging.getLogger("hocqa.test").info("hello")
    assert stream.getvalue().rstrip().endswith("| INFO | hocqa.test | hello")


def test_enable_trace_is_isolated(restore_loggers):
    stream = io.StringIO()
    trace = enable_trace(stream)
    trace.info("E 1 clause#0")
    assert not trace.propagate
    assert stream.getvalue() == "E 1 clause#0\n"


def test_log_input_error_is_a_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="hocqa.input"):
        error_id = log_input_error("facet declared but unused", {"code": "UNUSED"})
    assert error_id.startswith("INPUT_")
    assert "facet declared but unused" in caplog.text
