"""End-to-end command-line runs: output contract, config handling, exit codes."""

import json
import math

import numpy as np
import pytest

from dleit.cli import _parse_pair, _parse_sweep, main


def run_csv(tmp_path, name, argv):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    assert code == 0
    return out.read_text()


def parse_csv(text):
    lines = text.strip().splitlines()
    meta = [l for l in lines if l.startswith("# ")]
    table = [l for l in lines if not l.startswith("# ")]
    columns = table[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in table[1:]]
    return meta, columns, rows


def test_parse_sweep_inclusive_grid():
    assert _parse_sweep("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    with pytest.raises(ValueError):
        _parse_sweep("0:1")
    with pytest.raises(ValueError):
        _parse_sweep("0:1:-0.5")


def test_parse_pair():
    assert _parse_pair("0.5:60") == (0.5, 60.0)
    with pytest.raises(ValueError):
        _parse_pair("0.5")


def test_steady_zero_depth_row(tmp_path):
    text = run_csv(tmp_path, "steady.csv", ["steady", "--alpha", "0"])
    meta, columns, rows = parse_csv(text)
    assert columns == ["phi_r", "T_p", "T_s", "dphi_p", "dphi_s"]
    assert rows == [[0.0, 1.0, 1.0, 0.0, 0.0]]
    assert any("alpha = 0.0" in line for line in meta)


def test_steady_near_half_turn_is_opaque(tmp_path):
    text = run_csv(
        tmp_path,
        "opaque.csv",
        ["steady", "--alpha", "100", "--delta", "0", "--phi-r", "3.14159"],
    )
    _, _, rows = parse_csv(text)
    assert rows[0][1] < 1e-9
    assert rows[0][2] < 1e-9


def test_steady_sweep_json_structure(tmp_path):
    out = tmp_path / "sweep.json"
    code = main(
        ["steady", "--alpha", "10", "--phi-r-sweep", "0:6.28:0.5",
         "--samples", "200", "--format", "json", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert set(payload) == {"config", "columns", "data"}
    assert payload["config"]["command"] == "steady"
    assert payload["config"]["alpha"] == 10.0
    assert payload["columns"] == ["phi_r", "T_p", "T_s", "dphi_p", "dphi_s"]
    assert len(payload["data"]) == 13
    assert all(len(row) == 5 for row in payload["data"])
    assert payload["data"][0][0] == 0.0
    assert payload["data"][0][1] == pytest.approx(1.0, abs=1e-9)


def test_threaded_sweep_is_deterministic(tmp_path):
    argv = ["steady", "--alpha", "10", "--phi-r-sweep", "0:6.28:0.5",
            "--samples", "200", "--threads", "2"]
    first = run_csv(tmp_path, "a.csv", argv)
    second = run_csv(tmp_path, "b.csv", argv)
    serial = run_csv(tmp_path, "c.csv", argv[:-2])
    assert first == second == serial


def test_phase_diagram_single_and_multi(tmp_path):
    single = run_csv(
        tmp_path, "one.csv",
        ["phase-diagram", "--alpha", "5", "--phi-r", "1.0", "--samples", "50"],
    )
    _, columns, rows = parse_csv(single)
    assert columns == ["zeta", "re_probe", "im_probe", "re_signal", "im_signal"]
    assert len(rows) == 50
    assert rows[0] == [0.0, 1.0, 0.0, 1.0, 0.0]

    multi = run_csv(
        tmp_path, "two.csv",
        ["phase-diagram", "--alpha", "5", "--phi-r", "1.0", "2.0",
         "--samples", "50"],
    )
    _, columns, rows = parse_csv(multi)
    assert columns[0] == "phi_r"
    assert len(rows) == 100
    assert {row[0] for row in rows} == {1.0, 2.0}


def test_jump_verify_locates_zero(tmp_path):
    text = run_csv(
        tmp_path, "jump.csv",
        ["jump", "--delta", "16.5", "10", "--verify"],
    )
    _, columns, rows = parse_csv(text)
    assert columns == ["delta", "critical_depth", "probe_jump_phase",
                       "signal_jump_phase", "zero_zeta", "zero_offset",
                       "grid_step"]
    for row in rows:
        assert not math.isnan(row[4])
        assert row[5] < row[6]
    assert rows[0][1] == pytest.approx(52.0267, abs=1e-3)


def test_jump_sweep_grid(tmp_path):
    text = run_csv(tmp_path, "jumps.csv", ["jump", "--delta-sweep", "5:25:5"])
    _, columns, rows = parse_csv(text)
    assert [row[0] for row in rows] == [5.0, 10.0, 15.0, 20.0, 25.0]
    assert columns == ["delta", "critical_depth", "probe_jump_phase",
                       "signal_jump_phase"]


def test_apm_command_finds_operating_point(tmp_path):
    text = run_csv(
        tmp_path, "apm.csv",
        ["apm", "--alpha", "100", "--target", "pi", "--scan-step", "0.5"],
    )
    _, columns, rows = parse_csv(text)
    assert columns == ["alpha", "delta_opt", "phi_r", "T_with", "T_without",
                       "phase_with", "phase_without", "contrast"]
    row = rows[0]
    assert 16.0 < row[1] < 17.0
    assert row[7] == pytest.approx(2.6114, abs=0.02)


def test_propagate_emits_waveforms_and_energy_meta(tmp_path):
    text = run_csv(
        tmp_path, "prop.csv",
        ["propagate", "--alpha", "5", "--pulse", "square", "--t-on", "0",
         "--t-off", "5", "--n-z", "32", "--dt", "0.05", "--t-final", "10",
         "--t-stride", "5"],
    )
    meta, columns, rows = parse_csv(text)
    assert len(columns) == 9
    assert len(rows) == 41
    assert any("energy_transmission_probe" in line for line in meta)
    assert any("group_delay_signal" in line for line in meta)


def test_amplify_sweep_threads_deterministic(tmp_path):
    argv = ["amplify-sweep", "--alpha", "5", "10", "20", "--scan-step", "0.5",
            "--threads", "3"]
    first = run_csv(tmp_path, "amp1.csv", argv)
    second = run_csv(tmp_path, "amp2.csv", argv)
    assert first == second
    _, columns, rows = parse_csv(first)
    assert columns == ["alpha", "delta_opt", "phi_r_opt", "T_p", "T_s"]
    t_s = [row[4] for row in rows]
    assert t_s == sorted(t_s)


def test_config_file_defaults_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# defaults for the dispersive point\n"
        "alpha = 50\n"
        "delta = 3\n"
        "phi_r = 1.5\n"
    )
    out = tmp_path / "cfg.json"
    code = main(
        ["steady", "--config", str(cfg), "--alpha", "10",
         "--format", "json", "--out", str(out)]
    )
    assert code == 0
    config = json.loads(out.read_text())["config"]
    assert config["alpha"] == 10.0
    assert config["delta"] == 3.0
    assert config["phi_r"] == 1.5


def test_config_file_rejects_nested_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("config = other.cfg\n")
    assert main(["steady", "--alpha", "1", "--config", str(cfg)]) == 2


def test_json_replaces_undefined_values_with_null(tmp_path):
    out = tmp_path / "silent.json"
    code = main(
        ["propagate", "--alpha", "5", "--probe-amp", "0", "--signal-amp", "0",
         "--pulse", "square", "--t-on", "0", "--t-off", "2", "--n-z", "16",
         "--dt", "0.05", "--t-final", "5", "--format", "json", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["config"]["group_delay_probe"] is None
    assert payload["config"]["energy_transmission_probe"] == 0.0


def test_exit_code_for_invalid_physics(capsys):
    assert main(["steady", "--alpha", "-5"]) == 2
    assert "error:" in capsys.readouterr().err


def test_exit_code_for_numerical_instability(capsys):
    code = main(
        ["propagate", "--alpha", "10", "--probe-amp", "50",
         "--signal-amp", "50", "--n-z", "32", "--dt", "0.02",
         "--t-final", "20"]
    )
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_exit_code_for_unwritable_output(capsys):
    code = main(["steady", "--alpha", "0", "--out", "/no_such_dir/x.csv"])
    assert code == 4
    capsys.readouterr()


def test_missing_subcommand_exits_via_parser():
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2


def test_mutually_exclusive_phase_flags():
    with pytest.raises(SystemExit) as err:
        main(["steady", "--alpha", "1", "--phi-r", "1", "--phi-r-sweep", "0:1:0.5"])
    assert err.value.code == 2


def test_stdout_output(capsys):
    assert main(["jump", "--delta", "16.5"]) == 0
    out = capsys.readouterr().out
    assert "delta,critical_depth,probe_jump_phase,signal_jump_phase" in out
