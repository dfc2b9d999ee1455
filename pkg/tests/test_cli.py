import csv
import json

import pytest

from app import main
from logtools import issue_tracker

INTERVAL = {
    "space": ["a", "b"],
    "gambles": {"Ia": [1, 0], "Ib": [0, 1]},
    "assessments": [{"gamble": "Ia", "lower": "3/10"}, {"gamble": "Ib", "lower": "3/5"}],
}
VACUOUS_CD = {"space": ["c", "d"]}


@pytest.fixture(autouse=True)
def fresh_issues():
    issue_tracker.clear()
    yield
    issue_tracker.clear()


@pytest.fixture
def run_cli(tmp_path):
    def run(*argv: str) -> int:
        return main([*argv, "--log-dir", str(tmp_path / "logs")])

    return run


class TestCheck:
    def test_vacuous_instance(self, run_cli, write_json, capsys):
        path = write_json("vacuous.json", {"space": ["a", "b"]})
        assert run_cli("check", path) == 0
        assert capsys.readouterr().out.strip() == "coherent (0 assessments)"

    def test_incoherent_instance(self, run_cli, write_json, capsys):
        doc = {
            "space": ["a", "b"],
            "assessments": [{"gamble": [1, 0], "lower": "4/5"}, {"gamble": [0, 1], "lower": "1/2"}],
        }
        assert run_cli("check", write_json("loss.json", doc)) == 3
        assert capsys.readouterr().out.startswith("incurs partial loss")

    def test_direct_route_structured(self, run_cli, write_json, capsys):
        assert run_cli("check", write_json("interval.json", INTERVAL), "--direct", "--format", "structured") == 0
        document = json.loads(capsys.readouterr().out)
        assert document["verdict"] == "coherent"
        assert document["route"] == "direct"

    def test_malformed_document(self, run_cli, write_json, capsys):
        doc = {"space": ["a", "b"], "assessments": [{"gamble": [1, 0], "event": [], "lower": 0}]}
        assert run_cli("check", write_json("bad.json", doc)) == 2
        assert "empty conditioning event" in capsys.readouterr().err

    def test_missing_file(self, run_cli, tmp_path, capsys):
        assert run_cli("check", str(tmp_path / "nowhere.json")) == 2
        assert "cannot read file" in capsys.readouterr().err


class TestNatex:
    def test_inline_gamble(self, run_cli, write_json, capsys):
        doc = {"space": ["a", "b"], "assessments": [{"gamble": [1, 0], "lower": "3/10"}]}
        assert run_cli("natex", write_json("single.json", doc), "--gamble", "[0,1]", "--event", "all") == 0
        assert capsys.readouterr().out.strip() == "0"

    def test_named_gamble_upper(self, run_cli, write_json, capsys):
        assert run_cli("natex", write_json("interval.json", INTERVAL), "--gamble", "Ia", "--upper") == 0
        assert capsys.readouterr().out.strip() == "2/5"

    def test_structured_queries(self, run_cli, write_json, capsys):
        doc = {**INTERVAL, "queries": [{"gamble": "Ia"}, {"gamble": "Ib", "event": ["b"]}]}
        assert run_cli("natex", write_json("queries.json", doc), "--format", "structured") == 0
        document = json.loads(capsys.readouterr().out)
        assert document["bound"] == "lower"
        assert [row["value"] for row in document["values"]] == ["3/10", "1"]

    def test_no_queries(self, run_cli, write_json, capsys):
        assert run_cli("natex", write_json("interval.json", INTERVAL)) == 0
        assert capsys.readouterr().out.strip() == "no queries"

    def test_incoherent_input(self, run_cli, write_json, capsys):
        doc = {"space": ["a", "b"], "assessments": [{"gamble": [1, 0], "lower": 1}, {"gamble": [0, 1], "lower": 1}]}
        assert run_cli("natex", write_json("loss.json", doc), "--gamble", "[1,1]") == 3
        assert capsys.readouterr().err.startswith("incoherent:")


class TestMeasurable:
    def test_named_family(self, run_cli, write_json, capsys):
        doc = {"space": ["a", "b", "c"], "families": {"split": [["a"], ["b", "c"]]}}
        assert run_cli("measurable", write_json("abc.json", doc), "--gamble", "[2,1,1]", "--family", "split") == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("measurable:")
        assert lines[-1] == "threshold condition: holds"

    def test_not_measurable_structured(self, run_cli, write_json, capsys):
        doc = {"space": ["a", "b", "c"], "families": {"split": [["a"], ["b", "c"]]}}
        path = write_json("abc.json", doc)
        assert run_cli("measurable", path, "--gamble", "[0,1,2]", "--family", "split", "--format", "structured") == 0
        document = json.loads(capsys.readouterr().out)
        assert document["measurable"] is False
        assert document["threshold_condition"] is False

    def test_negative_gamble(self, run_cli, write_json, capsys):
        path = write_json("ab.json", {"space": ["a", "b"]})
        assert run_cli("measurable", path, "--gamble", "[-1,0]", "--family", "singletons") == 2


class TestProduct:
    def test_joint_values(self, run_cli, write_json, capsys):
        single = {"space": ["a", "b"], "assessments": [{"gamble": [1, 0], "lower": "3/10"}]}
        query = {"queries": [{"gamble": [1, 1, 0, 0]}, {"gamble": [1, 0, 0, 0]}]}
        status = run_cli(
            "product",
            write_json("ab.json", single),
            write_json("cd.json", VACUOUS_CD),
            "--query",
            write_json("query.json", query),
            "--format",
            "structured",
        )
        assert status == 0
        document = json.loads(capsys.readouterr().out)
        assert document["space"] == ["(a,c)", "(a,d)", "(b,c)", "(b,d)"]
        assert document["generators"] == 3
        assert [row["lower"] for row in document["values"]] == ["3/10", "0"]

    def test_query_space_mismatch(self, run_cli, write_json, capsys):
        query = {"space": ["x", "y"], "queries": [{"gamble": [1, 0]}]}
        status = run_cli(
            "product",
            write_json("ab.json", INTERVAL),
            write_json("cd.json", VACUOUS_CD),
            "--query",
            write_json("query.json", query),
        )
        assert status == 2
        assert "query space" in capsys.readouterr().err


class TestVerify:
    def test_pair_document(self, run_cli, write_json, capsys):
        pair = {"factor1": INTERVAL, "factor2": VACUOUS_CD, "fam2": "all"}
        assert run_cli("verify", write_json("pair.json", pair), "--property", "additivity", "--seed", "7") == 0
        assert capsys.readouterr().out.strip().endswith("all properties hold")

    def test_two_instance_files(self, run_cli, write_json, capsys):
        first, second = write_json("ab.json", INTERVAL), write_json("cd.json", VACUOUS_CD)
        assert run_cli("verify", first, second, "--property", "marginals", "--samples", "1") == 0

    def test_coherent_joint_reports_without_weights(self, run_cli, write_json, capsys):
        first, second = write_json("ab.json", INTERVAL), write_json("cd.json", VACUOUS_CD)
        status = run_cli("verify", first, second, "--property", "marginals", "--samples", "1", "--format", "structured")
        assert status == 0
        document = json.loads(capsys.readouterr().out)
        assert document["passed"] is True
        joint = next(p for p in document["properties"] if p["name"] == "joint avoids partial loss")
        assert joint["checked"] == 1
        assert joint["violations"] == []

    def test_single_instance(self, run_cli, write_json, capsys):
        path = write_json("interval.json", INTERVAL)
        assert run_cli("verify", path, "--property", "envelope", "--format", "structured") == 0
        document = json.loads(capsys.readouterr().out)
        assert document["passed"] is True
        names = [p["name"] for p in document["properties"]]
        assert names == ["natural extension matches credal envelope", "credal vertices match grid oracle"]

    def test_pair_group_needs_two_models(self, run_cli, write_json):
        path = write_json("interval.json", INTERVAL)
        assert run_cli("verify", path, "--property", "factorisation") == 2

    def test_corrupted_suite_exits_with_violation(self, run_cli, tmp_path, capsys):
        issues = tmp_path / "issues.csv"
        status = run_cli(
            "verify",
            "--property",
            "additivity",
            "--corrupt",
            "external additivity",
            "--models",
            "1",
            "--samples",
            "1",
            "--format",
            "structured",
            "--issues-csv",
            str(issues),
        )
        assert status == 4
        document = json.loads(capsys.readouterr().out)
        assert document["passed"] is False
        with open(issues, encoding="utf8", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert any("external additivity" in row["message"] for row in rows)

    def test_too_many_files(self, run_cli, write_json):
        path = write_json("ab.json", INTERVAL)
        assert run_cli("verify", path, path, path) == 2
