import json

import pytest

from treksep.cli import main
from treksep.instances import CHOKE_TEXT, SPIDER_TEXT


@pytest.fixture
def choke_file(tmp_path):
    path = tmp_path / "choke.graph"
    path.write_text(CHOKE_TEXT)
    return str(path)


@pytest.fixture
def spider_file(tmp_path):
    path = tmp_path / "spider.graph"
    path.write_text(SPIDER_TEXT)
    return str(path)


def test_validate_ok(choke_file, capsys):
    assert main(["validate", choke_file]) == 0
    assert capsys.readouterr().out == ""


def test_validate_cycle(tmp_path, capsys):
    path = tmp_path / "bad.graph"
    path.write_text("v 2\ne 1 -> 2\ne 2 -> 1\n")
    assert main(["validate", str(path)]) == 1
    assert "directed cycle" in capsys.readouterr().out


def test_validate_missing_file():
    assert main(["validate", "/nonexistent/g.graph"]) == 2


def test_validate_parse_error(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("e 1 -> 2\n")
    assert main(["validate", str(path)]) == 2


def test_rank_text(choke_file, capsys):
    assert main(["rank", choke_file, "--A", "1,3", "--B", "4,5"]) == 0
    out = capsys.readouterr().out
    assert "rank 1" in out and "C_R={4}" in out
    assert "pair view" in out  # DAG extra line


def test_rank_json_schema(choke_file, capsys):
    assert main(["rank", choke_file, "--A", "1,3", "--B", "4,5",
                 "--output", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert list(payload) == ["rank", "certificate"]
    assert payload["rank"] == 1
    assert payload["certificate"] == {"cl": [], "cm": [], "cr": [4]}


def test_rank_with_oracle(spider_file, capsys):
    assert main(["rank", spider_file, "--A", "1,2,3", "--B", "4,5,6",
                 "--oracle", "--seed", "5", "--output", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert list(payload) == ["rank", "certificate", "oracle_rank", "agrees"]
    assert payload["rank"] == payload["oracle_rank"] == 2
    assert payload["agrees"] is True


def test_rank_seed_echoed_in_text(choke_file, capsys):
    assert main(["rank", choke_file, "--A", "1", "--B", "5",
                 "--oracle", "--seed", "77"]) == 0
    assert "seed 77" in capsys.readouterr().out


def test_rank_bad_ids(choke_file, capsys):
    assert main(["rank", choke_file, "--A", "1,9", "--B", "4"]) == 2
    assert "out of range" in capsys.readouterr().err


def test_rank_singleton_overlap(choke_file, capsys):
    assert main(["rank", choke_file, "--A", "1", "--B", "1"]) == 0
    assert "rank 1" in capsys.readouterr().out


def test_tsep(choke_file, capsys):
    assert main(["tsep", choke_file, "--A", "1,3", "--B", "4,5",
                 "--CR", "4"]) == 0
    assert capsys.readouterr().out.strip() == "yes"
    assert main(["tsep", choke_file, "--A", "1,3", "--B", "4,5",
                 "--CR", "5"]) == 1
    assert capsys.readouterr().out.strip() == "no"
    assert main(["tsep", choke_file, "--A", "1,3", "--B", "4,5",
                 "--CL", "1,3"]) == 0


def test_dsep(tmp_path, capsys):
    chain = tmp_path / "chain.graph"
    chain.write_text("v 3\ne 1 -> 2\ne 2 -> 3\n")
    assert main(["dsep", str(chain), "--A", "1", "--B", "3", "--C", "2"]) == 0
    assert capsys.readouterr().out.strip() == "yes/yes"
    collider = tmp_path / "collider.graph"
    collider.write_text("v 3\ne 1 -> 3\ne 2 -> 3\n")
    assert main(["dsep", str(collider), "--A", "1", "--B", "2", "--C", "3"]) == 1
    assert capsys.readouterr().out.strip() == "no/no"


def test_dsep_rejects_overlap(tmp_path, capsys):
    chain = tmp_path / "chain.graph"
    chain.write_text("v 3\ne 1 -> 2\ne 2 -> 3\n")
    assert main(["dsep", str(chain), "--A", "1", "--B", "1"]) == 2


def test_ci(choke_file, capsys):
    assert main(["ci", choke_file, "--A", "1", "--B", "5", "--C", "4"]) == 0
    assert main(["ci", choke_file, "--A", "1", "--B", "5"]) == 1


def test_treks_listing(choke_file, capsys):
    assert main(["treks", choke_file, "--i", "1", "--j", "4",
                 "--output", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 2
    monos = {t["monomial"] for t in payload["treks"]}
    assert monos == {"lambda(1,2)*lambda(2,4)*phi(1,1)",
                     "lambda(1,3)*lambda(3,4)*phi(1,1)"}


def test_treks_empty(spider_file, capsys):
    assert main(["treks", spider_file, "--i", "3", "--j", "6",
                 "--output", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 0


def test_treks_cap(choke_file, capsys):
    assert main(["treks", choke_file, "--i", "1", "--j", "4", "--cap", "1"]) == 4


def test_verify_small_run(capsys):
    assert main(["verify", "--graphs", "3", "--max-vertices", "4",
                 "--seed", "1", "--output", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["seed"] == 1
    assert payload["failures"] == []
    assert payload["checks"]["canonical_instances"]["failures"] == 0


def test_usage_error_exit_code():
    assert main(["rank"]) == 2
    assert main([]) == 2
