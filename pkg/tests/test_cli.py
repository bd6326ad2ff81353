"""Exit codes, report formats, and configuration handling for `verify`."""

import json
import time

import pytest

from onsalg import cli
from onsalg.report import finish_report

CHECK_KEYS = {"name", "status", "residual_terms", "region", "duration_ms", "witnesses"}


def run_json(argv, capsys):
    code = cli.run(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


# -- exit codes ---------------------------------------------------------------


def test_unknown_suite_is_a_usage_error(capsys):
    assert cli.run(["bogus"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_missing_suite_is_a_usage_error(capsys):
    assert cli.run([]) == 2
    assert "no suite" in capsys.readouterr().err


def test_unknown_flag_exits_two(capsys):
    assert cli.run(["frt", "--bogus"]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0
    assert "verification suite" in capsys.readouterr().out


def test_window_too_small(capsys):
    assert cli.run(["frt", "--window", "1"]) == 2
    assert "window" in capsys.readouterr().err


def test_max_k_cannot_exceed_window(capsys):
    assert cli.run(["frt", "--window", "4", "--max-k", "9"]) == 2
    assert "max-k" in capsys.readouterr().err


def test_check_level_window_error_is_config_error(capsys):
    # frt needs window >= 4; the failure surfaces as exit 2, not a crash
    assert cli.run(["frt", "--window", "3", "--max-k", "3"]) == 2
    assert "window" in capsys.readouterr().err


def test_passing_suite_exits_zero(capsys):
    assert cli.run(["frt", "--window", "4"]) == 0
    out = capsys.readouterr().out
    assert "[ok  ]" in out
    assert "summary: 2 passed, 0 failed" in out


def test_failing_check_exits_one(monkeypatch, capsys):
    def forced_failure():
        return finish_report(
            "forced", [("spot", "leftover")], 1, "synthetic", time.monotonic()
        )

    monkeypatch.setattr(cli, "suite_checks", lambda cfg: [(forced_failure, ())])
    assert cli.run(["rmatrix"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] forced" in out
    assert "at spot: leftover" in out
    assert "summary: 0 passed, 1 failed" in out


def test_main_raises_systemexit():
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2


# -- json format --------------------------------------------------------------


def test_json_document_shape(capsys):
    code, doc = run_json(["frt", "--window", "4"], capsys)
    assert code == 0
    assert set(doc) == {"suite", "window", "checks", "summary"}
    assert doc["suite"] == "frt"
    assert doc["window"] == 4
    assert doc["summary"] == {"pass": 2, "fail": 0}
    for check in doc["checks"]:
        assert set(check) == CHECK_KEYS
        assert check["status"] == "pass"
        assert check["residual_terms"] == 0
        assert check["witnesses"] == []


def test_json_is_deterministic_apart_from_timings(capsys):
    def scrubbed():
        _, doc = run_json(["onsager", "--window", "2", "--max-k", "2"], capsys)
        for check in doc["checks"]:
            check["duration_ms"] = 0.0
        return doc

    assert scrubbed() == scrubbed()


def test_seed_reaches_the_sampled_check(capsys):
    _, doc = run_json(["onsager", "--window", "2", "--max-k", "2", "--seed", "7"], capsys)
    sampled = [c for c in doc["checks"] if c["name"].startswith("jacobi_sampled")]
    assert len(sampled) == 1
    assert "seed 7" in sampled[0]["region"]


def test_notes_only_for_charge_suites(capsys):
    _, doc = run_json(["charges", "--window", "3", "--max-k", "2"], capsys)
    assert doc["notes"][0] == "[t_1, b_1] for onsager: 36 normal-ordered terms"
    assert len(doc["notes"]) == 3
    _, doc = run_json(["kappa", "--window", "3", "--max-k", "2"], capsys)
    assert "notes" not in doc


def test_all_runs_every_suite(capsys):
    code, doc = run_json(["all", "--window", "4", "--max-k", "2"], capsys)
    assert code == 0
    assert len(doc["checks"]) == 51
    assert doc["summary"] == {"pass": 51, "fail": 0}
    assert "notes" in doc


# -- config files -------------------------------------------------------------


def test_config_file_supplies_fields(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"suite": "frt", "window": 4, "format": "json"}))
    assert cli.run(["--config", str(path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["suite"] == "frt"
    assert doc["window"] == 4


def test_flags_override_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"suite": "frt", "window": 4}))
    _, doc = run_json(["--config", str(path), "--window", "5"], capsys)
    assert doc["window"] == 5


def test_config_errors(tmp_path, capsys):
    assert cli.run(["--config", str(tmp_path / "missing.json")]) == 2
    assert "cannot read config" in capsys.readouterr().err

    path = tmp_path / "bad.json"
    path.write_text("[1, 2]")
    assert cli.run(["--config", str(path)]) == 2
    assert "JSON object" in capsys.readouterr().err

    path.write_text(json.dumps({"suite": "frt", "windw": 4}))
    assert cli.run(["--config", str(path)]) == 2
    assert "unknown config keys: windw" in capsys.readouterr().err


# -- parallel execution -------------------------------------------------------


def test_parallel_matches_serial(capsys):
    _, serial = run_json(["currents", "--window", "4", "--max-k", "2"], capsys)
    _, parallel = run_json(
        ["currents", "--window", "4", "--max-k", "2", "--parallel"], capsys
    )
    names = [c["name"] for c in serial["checks"]]
    assert names == [c["name"] for c in parallel["checks"]]
    assert parallel["summary"] == {"pass": len(names), "fail": 0}
