# logging_setup.py
import logging, sys

FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
TRACE_LOGGER = "hocqa.trace"


def configure_logging(level="WARNING", stream=None):
    """Route every record to stderr; stdout carries result records only."""
    root = logging.getLogger()
    if root.handlers:  # avoid double logging
        for h in list(root.handlers): root.removeHandler(h)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(FORMAT))
    root.addHandler(handler)
    root.setLevel(level.upper() if isinstance(level, str) else level)
    return root


def enable_trace(stream=None):
    # tableau rule applications are INFO on their own logger, independent of the root level
    trace = logging.getLogger(TRACE_LOGGER)
    for h in list(trace.handlers): trace.removeHandler(h)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    trace.addHandler(handler)
    trace.setLevel(logging.INFO)
    trace.propagate = False
    return trace


def critical(msg, *args, **kw):
    # enforce tracebacks everywhere CRITICAL is used
    kw.setdefault("exc_info", True)
    logging.getLogger("hocqa").critical(msg, *args, **kw)
