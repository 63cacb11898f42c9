from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import subprocess
import sys
from pathlib import Path

import pytest

from areamoments.cli import CliConfig, main, resolve_config
from areamoments.walk_oracle import cardinal


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    for var in ("AREAMOMENTS_CACHE", "AREAMOMENTS_FORMAT", "AREAMOMENTS_TOLERANCE",
                "AREAMOMENTS_BUDGET", "AREAMOMENTS_QUADRATURE_MARGIN"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv("AREAMOMENTS_CONFIG", str(tmp_path / "no-config.json"))
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "xdg-cache"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_pretty(capsys, tmp_path):
    code, out, _ = run(capsys, "moments", "--max", "4", "--cache", str(tmp_path / "c.json"))
    assert code == 0
    assert "P_2(n1,n2) = n1*n2/3" in out
    assert "7*(n1*n2)^2/15 - (n1*n2)*(n1+n2)/15" in out


@pytest.mark.parametrize("bad", ["0", "3", "-2"])
def test_moments_rejects_bad_max(capsys, bad):
    with pytest.raises(SystemExit) as exc:
        main(["moments", "--max", bad])
    assert exc.value.code == 2


def test_moments_json_and_csv(capsys, tmp_path):
    cache = str(tmp_path / "c.json")
    code, out, _ = run(capsys, "moments", "--max", "4", "--format", "json", "--cache", cache)
    doc = json.loads(out)
    assert code == 0 and [m["two_l"] for m in doc["moments"]] == [2, 4]
    assert doc["moments"][0]["poly"] == {"terms": [[1, 1, "1/3"]]}
    code, out, _ = run(capsys, "--format", "csv", "moments", "--max", "2", "--cache", cache)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["two_l", "power_n1", "power_n2", "coefficient"], ["2", "1", "1", "1/3"]]


def test_moments_cache_second_run_identical(capsys, caplog, tmp_path):
    cache = tmp_path / "c.json"
    _, first, _ = run(capsys, "moments", "--max", "6", "--cache", str(cache))
    stamp = cache.stat().st_mtime_ns
    with caplog.at_level(logging.INFO, logger="areamoments"):
        code, second, _ = run(capsys, "-v", "moments", "--max", "6", "--cache", str(cache))
    assert code == 0 and first == second
    assert cache.stat().st_mtime_ns == stamp
    assert "P_6 read from cache" in caplog.text


def test_distribution(capsys):
    code, out, _ = run(capsys, "distribution", "1", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["histogram"] == [[-1, "4"], [0, "16"], [1, "4"]]
    assert doc["cardinal"] == "24"
    code, out, _ = run(capsys, "distribution", "1", "0")
    assert "loops=2" in out and "       0  2" in out


def test_distribution_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "distribution", "1", "1")
    hist, table = out.split("\n\n")
    assert hist.splitlines()[0] == "area,count"
    rows = list(csv.DictReader(io.StringIO(table)))
    assert rows[0].keys() == {"n1", "n2", "two_l", "cardinal", "moment"}
    assert [r["moment"] for r in rows[:2]] == ["24", "8"]


def test_distribution_five_five(capsys):
    code, out, _ = run(capsys, "distribution", "5", "5")
    assert code == 0
    assert f"loops={cardinal(5, 5)}" in out


def test_distribution_budget_exit_code(capsys):
    code, _, err = run(capsys, "distribution", "5", "5", "--budget", "100")
    assert code == 3
    assert "--budget" in err


def test_verify(capsys, tmp_path):
    cache = str(tmp_path / "c.json")
    code, out, _ = run(capsys, "verify", "--n", "1", "--moments", "2", "--cache", cache)
    assert code == 0 and "3/3 cases pass" in out
    code, out, _ = run(capsys, "verify", "--n", "0", "--moments", "2", "--cache", cache)
    assert code == 0 and "1/1 cases pass" in out
    code, out, _ = run(capsys, "verify", "--n", "3", "--moments", "6", "--format", "json", "--cache", cache)
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["cases"]) == 10 * 3


def test_identities(capsys):
    code, out, _ = run(capsys, "identities")
    assert code == 0
    for name in ("comb1", "comb2", "comb3", "comb4", "comb5"):
        assert name in out
    assert "FAIL" not in out
    code, out, _ = run(capsys, "identities", "--max-k", "1", "--max-n", "1", "--format", "json")
    assert code == 0 and all(r["pass"] for r in json.loads(out))


def test_hh(capsys):
    code, out, _ = run(capsys, "hh", "--n1", "1", "--n2", "1", "--phi", "0")
    assert code == 0 and "lhs=24" in out and "rhs=24" in out
    code, out, _ = run(capsys, "hh", "--n1", "0", "--n2", "0", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc) == 3
    assert all(d["lhs_re"] == pytest.approx(1) and d["rhs_re"] == pytest.approx(1) for d in doc)


def test_hh_size_guard(capsys):
    code, _, err = run(capsys, "hh", "--n1", "5", "--n2", "4")
    assert code == 3


def test_config_precedence(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"format": "csv", "tolerance": 1e-6, "budget": 5}))
    args = argparse.Namespace(config=cfg_file)
    assert resolve_config(args, environ={}).output_format == "csv"
    env = {"AREAMOMENTS_FORMAT": "json", "AREAMOMENTS_BUDGET": "7"}
    cfg = resolve_config(args, environ=env)
    assert (cfg.output_format, cfg.state_budget, cfg.tolerance) == ("json", 7, 1e-6)
    args.format = "pretty"
    assert resolve_config(args, environ=env).output_format == "pretty"


def test_config_defaults_and_validation(tmp_path):
    cfg = resolve_config(argparse.Namespace(config=tmp_path / "missing.json"), environ={})
    assert cfg.output_format == "pretty" and cfg.tolerance == 1e-9
    assert cfg.cache_path.name == "moments.json"
    with pytest.raises(ValueError):
        CliConfig(Path("x"), tolerance=0)
    with pytest.raises(ValueError):
        CliConfig(Path("x"), output_format="xml")


def test_bad_config_value_is_usage_error(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["identities", "--tolerance", "-1"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "areamoments", "hh", "--n1", "1", "--n2", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert "ok" in proc.stdout
