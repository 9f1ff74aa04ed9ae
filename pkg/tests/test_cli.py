import json
import subprocess
import sys

import pytest

from eqdeg.cli import (
    EXIT_DEGENERATE,
    EXIT_INVALID,
    EXIT_OK,
    ConfigError,
    bundled_example_path,
    load_config,
    main,
    run_analyze,
    validate_report,
)


def d1_config(mu_values=("-2", "-2")):
    return {
        "group": "D1",
        "representation": "natural",
        "delays": 1,
        "linearization": {"mu": {"1": [mu_values[0]], "2": [mu_values[1]]}},
    }


def test_load_config_validation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config({"group": "D6"})


def test_run_analyze_small_group():
    result = run_analyze(d1_config())
    assert result.exit_code == EXIT_OK
    assert result.report is not None
    assert result.report.conclusions
    payload = result.report_json()
    assert validate_report(payload) == []
    text = result.report_text()
    assert "guaranteed non-constant solution classes" in text


def test_degenerate_exit_code(tmp_path):
    config = d1_config(("0", "0"))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    code = main(["analyze", str(path), "--out", str(tmp_path)])
    assert code == EXIT_DEGENERATE


def test_degenerate_with_s_runs_parity_route():
    config = d1_config(("-4", "-4"))
    result = run_analyze(config)
    assert result.exit_code == EXIT_DEGENERATE  # resonance at k = 2
    result2 = run_analyze(config, s=1)
    assert result2.exit_code == EXIT_OK
    assert result2.report.omega is None
    assert all(c.mode % 2 == 1 for c in result2.report.conclusions)


def test_malformed_json_exit_code(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{]")
    assert main(["analyze", str(path)]) == EXIT_INVALID


def test_missing_key_exit_code(tmp_path):
    path = tmp_path / "incomplete.json"
    path.write_text(json.dumps({"group": "D6"}))
    assert main(["analyze", str(path)]) == EXIT_INVALID


def test_lattice_subcommand(capsys):
    assert main(["lattice", "D6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "10 subgroup conjugacy classes (16 subgroups)" in out
    assert "|W|" in out


def test_burnside_subcommand(capsys):
    assert main(["burnside", "Z2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "(Z1)*(Z1) = 2(Z1)" in out


def test_basic_deg_subcommand(capsys):
    assert main(["basic-deg", "D1", "0", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("deg(k=0, l=1) = (G)")


def test_spectrum_subcommand(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(d1_config()))
    assert main(["spectrum", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "k=0" in out and "-" in out


def test_bundled_example_spectrum(capsys):
    path = bundled_example_path()
    assert path.exists()
    assert main(["spectrum", str(path)]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    grid = [line.split()[1:] for line in out[1:]]
    assert grid[0] == ["-", "-", "-", "-"]
    assert grid[1] == ["-", "-", "-", "-"]
    assert grid[2] == ["+", "-", "-", "-"]
    assert grid[3] == ["+", "+", "+", "+"]


def test_reports_are_byte_stable(tmp_path):
    config = d1_config()
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["analyze", str(path), "--out", str(out), "--json-only"]) == EXIT_OK
        outs.append((out / "report.json").read_bytes())
    assert outs[0] == outs[1]


def test_console_script_help():
    proc = subprocess.run(
        [sys.executable, "-m", "eqdeg.cli", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "analyze" in proc.stdout


def test_bundled_example_full_run():
    config = load_config(bundled_example_path())
    result = run_analyze(config)
    assert result.exit_code == EXIT_OK
    assert len(result.report.conclusions) == 15
    assert all(abs(c.coefficient) == c.x_o == 1 for c in result.report.conclusions)
    payload = result.report_json()
    assert validate_report(payload) == []
    assert len(payload["spectrum"]["negative_blocks"]) == 11


def test_verify_subcommand_small(tmp_path, capsys):
    config = {
        "group": "D1",
        "representation": "natural",
        "delays": 1,
        "linearization": {"matrices": [[["-2", "3/10"], ["3/10", "-2"]]]},
        "system": {
            "cubic": "1/2",
            "seed_component": 2,
            "seed_amplitude": 1.9,
            "fourier_modes": 16,
            "radius": 3.0,
            "growth_samples": 200,
        },
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    assert main(["verify", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert "growth_check" in out and "converged" in out


def test_triangle_network_pipeline():
    # a different symmetry group end to end: three nodes with S3 coupling
    config = {
        "group": "D3",
        "representation": "natural",
        "delays": 1,
        "linearization": {"mu": {"1": ["-2"], "3": ["-2"]}},
    }
    result = run_analyze(config)
    assert result.exit_code == EXIT_OK
    assert result.decomposition.multiplicities == (1, 0, 1)
    assert result.report.conclusions
    modes = {c.mode for c in result.report.conclusions}
    assert modes == {1}
    for c in result.report.conclusions:
        assert abs(c.coefficient) == c.x_o != 0
