from pathlib import Path

import pytest

from models.errors import ConfigError
from models.units import RegimeKind
from potentials.fields import PotentialField
from utils.config_parser import load_run_config, parse_run_config, serialize_run_config

REPO = Path(__file__).resolve().parent.parent

MINIMAL = """
scenario:
  name: gaussian
units:
  lambda0_over_w0: 2.0e-4
"""


def test_minimal_document_takes_defaults():
    cfg = parse_run_config(MINIMAL)
    assert cfg.scenario.scenario == "gaussian"
    assert cfg.scenario.n_rays == 201
    assert cfg.scenario.lambda0_over_w0 == 2e-4
    assert cfg.scenario.regime.kind is RegimeKind.NONRELATIVISTIC
    assert cfg.scenario.potential == PotentialField.free()
    assert cfg.comparator.enabled is False
    assert cfg.snapshot_every == 10


def test_empty_document_is_all_defaults():
    cfg = parse_run_config("")
    assert cfg.scenario.z_max_rayleigh == 3.0
    assert cfg.output_dir == "runs/latest"


def test_flat_keys_are_accepted():
    cfg = parse_run_config("scenario.n_rays: 101\nunits.regime: optics\n")
    assert cfg.scenario.n_rays == 101
    assert cfg.scenario.regime.kind is RegimeKind.OPTICS


def test_key_given_twice_is_refused():
    with pytest.raises(ConfigError, match="twice"):
        parse_run_config("scenario:\n  n_rays: 101\nscenario.n_rays: 101\n")


def test_out_of_range_value_names_key_and_line():
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(MINIMAL.replace("2.0e-4", "0"))
    assert excinfo.value.key == "units.lambda0_over_w0"
    assert excinfo.value.line == 5


def test_misspelled_key_suggests_the_nearest():
    with pytest.raises(ConfigError, match="did you mean 'scenario.n_rays'") as excinfo:
        parse_run_config("scenario:\n  nrays_: 201\n")
    assert excinfo.value.key == "scenario.nrays_"
    assert excinfo.value.line == 2


@pytest.mark.parametrize("document, key", [
    ("scenario:\n  n_rays: 50\n", "scenario.n_rays"),
    ("scenario:\n  n_rays: 101.0\n", "scenario.n_rays"),
    ("units:\n  eikonal: yes please\n", "units.eikonal"),
    ("units:\n  regime: quantum\n", "units.regime"),
    ("output:\n  snapshot_every: 0\n", "output.snapshot_every"),
    ("comparator:\n  modes: [1, true]\n", "comparator.modes"),
    ("scenario:\n  name: double_slit\n  slit_width: 9.0\n", "scenario.slit_separation"),
])
def test_invalid_values(document, key):
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(document)
    assert excinfo.value.key == key


def test_potential_parameters_must_fit_the_kind():
    cfg = parse_run_config("potential:\n  kind: linear_ramp\n  slope_x: 0.01\n")
    assert cfg.scenario.potential == PotentialField.linear_ramp(slope_x=0.01)
    with pytest.raises(ConfigError, match="does not apply") as excinfo:
        parse_run_config("potential:\n  kind: harmonic\n  slope_x: 0.01\n")
    assert excinfo.value.key == "potential.slope_x"


def test_tabulated_potential_needs_a_file():
    with pytest.raises(ConfigError, match="potential.file"):
        parse_run_config("potential:\n  kind: custom_tabulated\n")


def test_tabulated_file_resolves_next_to_the_config(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("potential:\n  kind: custom_tabulated\n  file: field.csv\n", encoding="utf-8")
    cfg = load_run_config(path)
    assert cfg.scenario.potential.source == str(tmp_path / "field.csv")


def test_malformed_yaml():
    with pytest.raises(ConfigError, match="not a valid YAML"):
        parse_run_config("scenario: [unclosed\n")
    with pytest.raises(ConfigError, match="mapping"):
        parse_run_config("- just\n- a list\n")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_run_config(tmp_path / "absent.yaml")


def test_serialized_config_parses_back_equal():
    cfg = parse_run_config(
        "scenario:\n  name: single_slit\n  n_rays: 151\n  half_width: 2.5\n"
        "units:\n  regime: relativistic\n  pc_over_rest_energy: 0.05\n"
        "potential:\n  kind: step_smoothed\n  height: 0.5\n  position: 10.0\n"
        "comparator:\n  enabled: true\n  state: mode\n  modes: [3]\n"
    )
    assert parse_run_config(serialize_run_config(cfg)) == cfg


@pytest.mark.parametrize("name", ["sample_run.yaml", "double_slit.yaml"])
def test_shipped_configs_are_valid(name):
    cfg = load_run_config(REPO / name)
    assert cfg.scenario.n_rays % 2 == 1


def test_double_slit_comparator_takes_the_scenario_slits():
    cfg = load_run_config(REPO / "double_slit.yaml")
    comparator = cfg.comparator
    assert comparator.state == "double_slit"
    assert (comparator.slit_width, comparator.slit_separation, comparator.edge_order) == (2.0, 8.0, 2)
    assert comparator.seeds % 2 == 0
