import pytest

from frontend import parse_kb, parse_query
from pipeline import ReasoningPipeline
from settings import ReasonerSettings


@pytest.fixture
def settings():
    # oracle bounds sized for the small hand-written KBs in this suite
    return ReasonerSettings(oracle_atom_bound=400, oracle_candidate_bound=100_000)


@pytest.fixture
def pipeline(settings):
    return ReasoningPipeline(settings)


@pytest.fixture
def kb():
    return parse_kb


@pytest.fixture
def query():
    return parse_query


@pytest.fixture
def dl4_file(tmp_path):
    """Write DSL text to a file and return its path."""
    def write(text, name="kb.dl4"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write
