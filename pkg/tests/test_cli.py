import json

import pytest
from click.testing import CliRunner

from main import cli

SMALL_RUN = """
scenario:
  name: gaussian
  n_rays: 51
  z_max_rayleigh: 0.05
units:
  lambda0_over_w0: 2.0e-4
output:
  snapshot_every: 10
"""

COMPARATOR = """
comparator:
  enabled: true
  points: 401
  box_length: 20.0
  dt: 0.01
  steps: 50
  seeds: 5
"""


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, text, name="run.yaml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_validate_accepts_a_good_config(runner, tmp_path):
    result = runner.invoke(cli, ["validate", str(write_config(tmp_path, SMALL_RUN))])
    assert result.exit_code == 0, result.output
    assert "[✓]" in result.output


def test_validate_reports_the_bad_key(runner, tmp_path):
    path = write_config(tmp_path, SMALL_RUN.replace("2.0e-4", "0"))
    result = runner.invoke(cli, ["validate", str(path)])
    assert result.exit_code == 2
    assert "units.lambda0_over_w0" in result.output


def test_run_writes_every_output(runner, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(cli, ["run", str(write_config(tmp_path, SMALL_RUN)),
                                 "--output-dir", str(out), "--quiet"])
    assert result.exit_code == 0, result.output
    for name in ("trajectories.csv", "figure.svg", "run_summary.json", "run_report.txt"):
        assert (out / name).exists()

    summary = json.loads((out / "run_summary.json").read_text(encoding="utf-8"))
    assert summary["scenario"]["n_rays"] == 51
    assert summary["waist_line"]["status"] == "OK"
    assert summary["conservation"]["status"] == "OK"
    assert summary["fringes"]["status"] == "NOT_APPLICABLE"
    assert summary["overall"] in ("PASS", "FAIL")
    assert "comparator" not in summary
    header = (out / "trajectories.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "t,ray_id,x,z,px,pz,R,Q,H,source"


def test_run_with_comparator(runner, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(cli, ["run", str(write_config(tmp_path, SMALL_RUN + COMPARATOR)),
                                 "--output-dir", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "bohm_trajectories.csv").exists()
    summary = json.loads((out / "run_summary.json").read_text(encoding="utf-8"))
    assert summary["comparator"]["stats"]["state"] == "packet"
    assert "RUN CHECKS" in result.output


def test_numerical_failure_exits_3(runner, tmp_path):
    path = write_config(tmp_path, SMALL_RUN.replace("  z_max_rayleigh: 0.05\n",
                                                    "  z_max_rayleigh: 0.05\n  dt: 1000.0\n"))
    out = tmp_path / "out"
    result = runner.invoke(cli, ["run", str(path), "--output-dir", str(out)])
    assert result.exit_code == 3
    summary = json.loads((out / "run_summary.json").read_text(encoding="utf-8"))
    assert summary["overall"] == "ERROR"
    assert summary["error"]["type"] == "StepSizeError"


def test_missing_config_exits_2(runner, tmp_path):
    result = runner.invoke(cli, ["run", str(tmp_path / "absent.yaml")])
    assert result.exit_code == 2


def test_figure_from_a_run(runner, tmp_path):
    out = tmp_path / "out"
    runner.invoke(cli, ["run", str(write_config(tmp_path, SMALL_RUN + "  emit_svg: false\n")),
                        "--output-dir", str(out), "--quiet"])
    assert not (out / "figure.svg").exists()
    svg = tmp_path / "redrawn.svg"
    result = runner.invoke(cli, ["figure", str(out / "trajectories.csv"), str(svg)])
    assert result.exit_code == 0, result.output
    assert svg.read_text(encoding="utf-8").lstrip().startswith("<?xml")


def test_figure_of_a_missing_file_exits_4(runner, tmp_path):
    result = runner.invoke(cli, ["figure", str(tmp_path / "absent.csv"), str(tmp_path / "x.svg")])
    assert result.exit_code == 4
