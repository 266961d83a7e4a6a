"""Command-line contract: subcommands, exit codes, flag/config equivalence."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from ppmchart.cli import run
from ppmchart.fixtures import chain_log, session_log
from ppmchart.logmodel import write_log


@pytest.fixture()
def chain_file(tmp_path: Path) -> Path:
    path = tmp_path / "chain.xes"
    path.write_bytes(write_log(chain_log((2.0, 4.0)), "xes"))
    return path


@pytest.fixture()
def mortgage_file(tmp_path: Path) -> Path:
    log, _ = session_log("mortgage", 27, 276, seed=42)
    path = tmp_path / "mortgage.xes"
    path.write_bytes(write_log(log, "xes"))
    return path


def test_validate_clean_log(chain_file, capsys):
    assert run(["validate", str(chain_file)]) == 0
    out = capsys.readouterr().out
    assert "0 findings" in out


def test_validate_reports_findings(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("element_id,name,timestamp_ms\na,MOVE_ACTIVITY,5\n")
    assert run(["validate", str(path)]) == 0
    assert "first-op-not-create" in capsys.readouterr().out


def test_render_twice_is_byte_identical(chain_file, tmp_path):
    out1, out2 = tmp_path / "c1.svg", tmp_path / "c2.svg"
    assert run(["render", str(chain_file), "-o", str(out1)]) == 0
    assert run(["render", str(chain_file), "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_bytes().startswith(b"<?xml")


def test_render_flags_equal_config_file(chain_file, tmp_path):
    config = {
        "time-option": "relative-time",
        "sort-by": "duration",
        "descending": True,
        "filters": {"hide-element-kinds": ["edge"]},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config))
    via_config = tmp_path / "a.svg"
    via_flags = tmp_path / "b.svg"
    assert run(["render", str(chain_file), "--config", str(cfg_path), "-o", str(via_config)]) == 0
    assert run([
        "render", str(chain_file),
        "--time-option", "relative-time", "--sort", "duration", "--descending",
        "--hide-element", "edge", "-o", str(via_flags),
    ]) == 0
    assert via_config.read_bytes() == via_flags.read_bytes()


def test_render_flags_override_config_file(chain_file, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"sort-by": "duration"}))
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(["render", str(chain_file), "--config", str(cfg_path),
                "--sort", "model-element", "-o", str(a)]) == 0
    assert run(["render", str(chain_file), "--sort", "model-element", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_render_style_override_flag(chain_file, tmp_path):
    out = tmp_path / "styled.svg"
    assert run(["render", str(chain_file),
                "--style-override", "CREATE_ACTIVITY=#010203,diamond",
                "-o", str(out)]) == 0
    assert b"rgb(1,2,3)" in out.read_bytes()


def test_analyze_json_totals(mortgage_file, tmp_path, capsys):
    assert run(["analyze", str(mortgage_file), "--json"]) == 0
    profiles = json.loads(capsys.readouterr().out)
    assert len(profiles) == 1
    assert profiles[0]["total-operations"] == 276


def test_analyze_csv_multiple_logs(chain_file, mortgage_file, tmp_path):
    out = tmp_path / "profiles.csv"
    assert run(["analyze", str(chain_file), str(mortgage_file), "--csv", "-o", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("log_id,")
    assert lines[1].startswith("chain,")
    assert lines[2].startswith("mortgage,")


def test_analyze_threshold_flag(mortgage_file, capsys):
    assert run(["analyze", str(mortgage_file), "--pause-min-gap-ms", "1", "--json"]) == 0
    profiles = json.loads(capsys.readouterr().out)
    assert len(profiles[0]["pause-intervals"]) > 0


def test_analyze_writes_report_figures(mortgage_file, tmp_path):
    figs = tmp_path / "figs"
    out = tmp_path / "p.json"
    assert run(["analyze", str(mortgage_file), "-o", str(out), "--figures-dir", str(figs)]) == 0
    png = figs / "mortgage.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_csv_input_auto_detected(tmp_path, capsys):
    path = tmp_path / "tiny.csv"
    path.write_text("element_id,name,timestamp_ms\nn1,CREATE_ACTIVITY,1000\n")
    assert run(["validate", str(path)]) == 0
    assert "0 findings" in capsys.readouterr().out


def test_unknown_flag_is_usage_error(chain_file):
    with pytest.raises(SystemExit) as exc:
        run(["render", str(chain_file), "--frobnicate"])
    assert exc.value.code == 1


def test_missing_file_is_data_error(tmp_path, capsys):
    assert run(["render", str(tmp_path / "absent.xes"), "-o", str(tmp_path / "o.svg")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_log_is_data_error(tmp_path, capsys):
    path = tmp_path / "broken.xes"
    path.write_text("<log><trace>")
    assert run(["render", str(path), "-o", str(tmp_path / "o.svg")]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_config_value_is_usage_error(chain_file, tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"sort-by": "bogus"}))
    assert run(["render", str(chain_file), "--config", str(cfg),
                "-o", str(tmp_path / "o.svg")]) == 1
    assert "sort-by" in capsys.readouterr().err
