from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from doper.cli import main


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.setenv("DOPER_CACHE_DIR", str(tmp_path / "cache"))
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def test_radii_commands(run):
    res = run("radii", "enumerate", "--p", "5", "--n", "2", "--distinct")
    assert res.exit_code == 0
    assert len(res.output.strip().splitlines()) == 2
    res = run("radii", "star", "--p", "5", "--rho", "[0,1]")
    assert res.output.strip() == "[0,1,2]"
    again = run("radii", "star", "--p", "5", "--rho", res.output.strip())
    assert again.output.strip() == "[0,1]"
    lift = run("radii", "lift", "--p", "7", "--rho", "[0,1,3]", "--a", "2", "--json")
    assert sum(json.loads(json.loads(lift.output))) % 7 == 2


def test_fusion_commands(run):
    assert run("fusion", "degree", "--p", "5", "--genus", "2").output.strip() == "5"
    res = run("fusion", "degree", "--p", "5", "--genus", "0", "--radii", "[0,1];[0,1];[0,1]")
    assert res.output.strip() == "1"
    res = run("fusion", "degree", "--p", "5", "--genus", "0", "--radii", "[0,3];[0,3];[0,3];[0,3]", "--method", "factorization")
    assert res.output.strip() == "2"
    table = run("fusion", "table", "--p", "5", "--n", "2")
    rows = [ln.split() for ln in table.output.strip().splitlines()[1:]]
    assert sorted(tuple(r[:3]) for r in rows) == [("0", "0", "0"), ("0", "1", "1"), ("1", "1", "1")]
    ok = run("fusion", "verify-factorization", "--p", "5", "--g1", "0", "--g2", "0", "--x", "[0,3];[0,3]", "--y", "[0,3];[0,3]")
    assert ok.exit_code == 0
    assert ok.output.strip() == "2 OK"


def test_fusion_cache_round_trip_is_byte_exact(run, tmp_path):
    cache = tmp_path / "cache"
    first = run("fusion", "table", "--p", "7", "--n", "5", "--json")
    files = list(cache.iterdir())
    assert len(files) == 1
    stored = files[0].read_bytes()
    assert stored.decode() == first.output
    second = run("fusion", "table", "--p", "7", "--n", "5", "--json")
    assert second.output == first.output
    assert files[0].read_bytes() == stored
    forced = run("fusion", "table", "--p", "7", "--n", "5", "--json", "--no-cache")
    assert forced.output == first.output


def test_cache_dir_flag_overrides_environment(run, tmp_path):
    other = tmp_path / "elsewhere"
    run("fusion", "table", "--p", "5", "--cache-dir", str(other))
    assert len(list(other.iterdir())) == 1
    assert not (tmp_path / "cache").exists()


def test_threads_do_not_change_output(run):
    args = ["fusion", "degree", "--p", "11", "--genus", "0", "--genus", "1", "--genus", "2", "--genus", "3", "--radii", "[0,1];[0,3];[0,5]", "--csv"]
    one = run(*args, "--threads", "1", "--no-cache")
    four = run(*args, "--threads", "4", "--no-cache")
    assert one.output == four.output
    header, *rows = one.output.strip().splitlines()
    assert header == "p,n,genus,radii,method,value"
    assert len(rows) == 4
    v1 = run("verlinde", "--p", "11", "--n", "3", "--genus", "3", "--threads", "1", "--no-cache")
    v4 = run("verlinde", "--p", "11", "--n", "3", "--genus", "3", "--threads", "4", "--no-cache")
    assert v1.output == v4.output


def test_verlinde_commands(run):
    assert run("verlinde", "--p", "5", "--n", "2", "--genus", "2").output.strip() == "5"
    assert run("verlinde", "--p", "3", "--n", "2", "--genus", "2").output.strip() == "1"
    res = run("verlinde", "--p", "7", "--n", "2", "--genus", "2", "--check-duality")
    assert res.output.strip() == "14 == 14 OK"


def test_exit_codes(run):
    assert run("verlinde", "--p", "5", "--n", "2", "--genus", "4").exit_code == 1
    assert run("verlinde", "--p", "6", "--n", "2", "--genus", "2").exit_code == 1
    assert run("verlinde", "--p", "5", "--genus", "2").exit_code == 2
    assert run("radii", "star", "--p", "5", "--rho", "[0,0]").exit_code == 1
    assert run("fusion", "table", "--p", "11", "--n", "4").exit_code == 1
    assert run("fusion", "degree", "--p", "5", "--genus", "2", "--method", "other").exit_code == 2
    assert run("oper", "dpsi", "--p", "5", "--marked", "0,1").exit_code == 1


def test_oper_commands(run, tmp_path):
    res = run("oper", "dpsi", "--p", "3", "--marked", "0,1,inf")
    assert res.exit_code == 0
    assert res.output.startswith("rank 3, dormant, exponents {0,1,2} at all marked points")
    assert run("oper", "brute-sl2", "--p", "5", "--radii", "[0,1];[0,1];[0,1]").output.strip() == "1"

    path = tmp_path / "line.oper"
    res = run("oper", "unique-glp1", "--p", "5", "--exponents", "1,0,2", "--out", str(path))
    assert res.exit_code == 0
    assert res.output.startswith("rank 4, dormant")
    twice = run("oper", "dualize", str(path), "--twice")
    assert twice.exit_code == 0
    assert "isomorphic to original: yes" in twice.output
    checked = run("oper", "check", str(path), "--json")
    assert json.loads(checked.output)["rank"] == 4


def test_oper_check_names_failed_axiom(run, tmp_path):
    good = tmp_path / "d.oper"
    run("oper", "dpsi", "--p", "3", "--out", str(good))
    lines = good.read_text().splitlines()
    broken = [ln if not ln.startswith("b[0]") else "b[0]: x" for ln in lines]
    bad = tmp_path / "bad.oper"
    bad.write_text("\n".join(broken) + "\n")
    res = run("oper", "check", str(bad))
    assert res.exit_code == 1
    assert "eta" in res.output
    garbage = tmp_path / "garbage.oper"
    garbage.write_text("hello\n")
    assert run("oper", "check", str(garbage)).exit_code == 1
