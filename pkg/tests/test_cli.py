import json

import pytest
from click.testing import CliRunner

from main import cli

KB = """
concept C, D;
role R;
C <= D;
a : C;
(a, b) : R;
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def kb_path(dl4_file):
    return str(dl4_file(KB))


def _lines(result):
    return [json.loads(line) for line in result.stdout.splitlines() if line.strip()]


def test_consistency(runner, kb_path):
    result = runner.invoke(cli, ["consistency", "--kb", kb_path])
    assert result.exit_code == 0
    (record,) = _lines(result)
    assert record["consistent"] is True
    assert record["open_branches"] >= 1
    assert "stage_seconds" not in record["complexity"]


def test_consistency_stops_at_the_first_open_branch(runner, kb_path):
    (first,) = _lines(runner.invoke(cli, ["consistency", "--kb", kb_path]))
    (full,) = _lines(runner.invoke(cli, ["--all-branches", "consistency", "--kb", kb_path]))
    assert first["open_branches"] == 1
    assert full["open_branches"] > 1


def test_inconsistent_kb_exits_one(runner, dl4_file):
    path = dl4_file("concept C; a : C; a : ~C;")
    result = runner.invoke(cli, ["consistency", "--kb", str(path)])
    assert result.exit_code == 1
    assert "closed tableau" in result.stderr
    assert _lines(result)[0]["consistent"] is False


def test_emit_expansion_header(runner, kb_path):
    result = runner.invoke(cli, ["consistency", "--kb", kb_path, "--emit-expansion"])
    assert result.exit_code == 0
    assert result.stdout.startswith("# m=")


def test_query_inline(runner, kb_path):
    result = runner.invoke(cli, ["query", "--kb", kb_path, "--q", "C(?x)"])
    assert result.exit_code == 0
    assert _lines(result) == [{"?x": "a"}, {"?x": "b"}]


@pytest.mark.parametrize("text", ["C(?x)", "R(a, ?y)", "?c(b)", "D(?x) & !C(?x)"])
def test_query_agrees_with_the_oracle(runner, kb_path, text):
    engine = runner.invoke(cli, ["query", "--kb", kb_path, "--q", text])
    oracle = runner.invoke(cli, ["oracle", "--kb", kb_path, "--atom-bound", "400", "--q", text])
    assert engine.exit_code == oracle.exit_code == 0
    key = lambda r: json.dumps(r, sort_keys=True)
    assert sorted(map(key, _lines(engine))) == sorted(map(key, _lines(oracle)))


def test_query_explain_reports_provenance(runner, kb_path):
    result = runner.invoke(cli, ["query", "--kb", kb_path, "--q", "D(?x)", "--explain"])
    records = _lines(result)
    assert [r["?x"] for r in records] == ["a", "b"]
    for record in records:
        assert record["branch"].startswith("0")
        assert record["leaf"] >= 0


def test_query_output_is_byte_stable(runner, kb_path):
    args = ["query", "--kb", kb_path, "--q", "R(?x, ?y) & D(?y)"]
    assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout


def test_semantic_eq_flag_answers_inequalities(runner, dl4_file):
    path = str(dl4_file("concept C; a : C; b : C;"))
    args = ["query", "--kb", path, "--q", "C(?x) & ?x != b"]
    assert _lines(runner.invoke(cli, args)) == []
    assert _lines(runner.invoke(cli, ["--semantic-eq", *args])) == [{"?x": "a"}]


def test_query_from_file(runner, kb_path, dl4_file):
    qpath = dl4_file("R(a, ?y)", name="q.hq")
    result = runner.invoke(cli, ["query", "--kb", kb_path, "--query", str(qpath)])
    assert result.exit_code == 0
    assert _lines(result) == [{"?y": "a"}, {"?y": "b"}]


def test_query_table_format(runner, kb_path):
    result = runner.invoke(cli, ["--format", "table", "query", "--kb", kb_path, "--q", "D(?x)"])
    assert result.exit_code == 0
    assert "?x" in result.stdout
    assert "a" in result.stdout


def test_query_table_without_answers(runner, kb_path):
    result = runner.invoke(cli, ["--format", "table", "query", "--kb", kb_path, "--q", "C(?x) & !C(?x)"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "(no answers)"


def test_query_needs_exactly_one_source(runner, kb_path):
    result = runner.invoke(cli, ["query", "--kb", kb_path])
    assert result.exit_code == 2


@pytest.mark.parametrize("concept,expected", [("D", "true"), ("C & D", "true"), ("~C", "false")])
def test_check(runner, kb_path, concept, expected):
    result = runner.invoke(cli, ["check", "--kb", kb_path, "--ind", "a", "--concept", concept])
    assert result.exit_code == 0
    assert result.stdout.strip() == expected


def test_entails(runner, kb_path):
    yes = runner.invoke(cli, ["entails", "--kb", kb_path, "--ind", "a", "--concept", "D"])
    no = runner.invoke(cli, ["entails", "--kb", kb_path, "--ind", "b", "--concept", "D"])
    assert yes.stdout.strip() == "true"
    assert no.stdout.strip() == "false"


def test_retrieve_instances(runner, kb_path):
    result = runner.invoke(cli, ["retrieve-instances", "--kb", kb_path, "--concept", "C"])
    assert result.exit_code == 0
    assert _lines(result) == [{"?x": "a"}, {"?x": "b"}]


def test_retrieve_fillers(runner, kb_path):
    result = runner.invoke(cli, ["retrieve-fillers", "--kb", kb_path, "--ind", "a", "--role", "R"])
    assert _lines(result) == [{"?y": "a"}, {"?y": "b"}]


def test_retrieve_concepts(runner, kb_path):
    result = runner.invoke(cli, ["retrieve-concepts", "--kb", kb_path, "--ind", "a"])
    assert {r["?c"] for r in _lines(result)} == {"C", "D"}


def test_retrieve_roles(runner, kb_path):
    result = runner.invoke(cli, ["retrieve-roles", "--kb", kb_path, "--ind", "a", "--other", "b"])
    assert "R" in {r["?r"] for r in _lines(result)}


def test_oracle_consistency(runner, kb_path):
    result = runner.invoke(cli, ["oracle", "--kb", kb_path, "--atom-bound", "400", "--compare"])
    assert result.exit_code == 0
    (record,) = _lines(result)
    assert record["consistent"] is True
    assert record["holds"] is True


def test_oracle_atom_bound_exceeded(runner, kb_path):
    result = runner.invoke(cli, ["oracle", "--kb", kb_path, "--atom-bound", "2"])
    assert result.exit_code == 3
    assert "Error [" in result.stderr


def test_parse_error_exits_two(runner, dl4_file):
    path = dl4_file("a : ;")
    result = runner.invoke(cli, ["consistency", "--kb", str(path)])
    assert result.exit_code == 2
    assert "Error [" in result.stderr


def test_unknown_log_level(runner, kb_path):
    result = runner.invoke(cli, ["--log-level", "chatty", "consistency", "--kb", kb_path])
    assert result.exit_code == 2


def test_generate_is_deterministic(runner):
    first = runner.invoke(cli, ["generate", "--seed", "7", "--with-query"])
    second = runner.invoke(cli, ["generate", "--seed", "7", "--with-query"])
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    assert "# query: " in first.stdout
