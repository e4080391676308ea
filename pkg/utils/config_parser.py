"""Run-configuration files: YAML with five sections and a closed key schema

Keys may be written nested (``scenario: {n_rays: 201}``) or flat
(``scenario.n_rays: 201``). Unknown keys are rejected.
"""
import difflib
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from comparator.runner import ComparatorConfig
from config import defaults
from models.errors import ConfigError
from models.units import Regime, RegimeKind
from potentials.fields import POTENTIAL_KINDS, PotentialField
from scenarios.builders import SCENARIOS, ScenarioConfig

SECTIONS = ("scenario", "units", "potential", "output", "comparator")


@dataclass(frozen=True)
class KeySpec:
    kind: type
    default: object = None
    check: object = None  # callable(value) -> bool
    bound: str = ""
    nullable: bool = False


def _positive(value):
    return math.isfinite(value) and value > 0


SCHEMA = {
    "scenario.name": KeySpec(str, defaults.SCENARIO, lambda v: v in SCENARIOS, f"one of {SCENARIOS}"),
    "scenario.n_rays": KeySpec(int, defaults.N_RAYS, lambda v: v >= 51 and v % 2 == 1, "odd and >= 51"),
    "scenario.half_width": KeySpec(float, defaults.HALF_WIDTH, _positive, "> 0 (>= 3 for gaussian)"),
    "scenario.z_max_rayleigh": KeySpec(float, defaults.Z_MAX_RAYLEIGH, _positive, "> 0"),
    "scenario.slit_width": KeySpec(float, defaults.SLIT_WIDTH, _positive, "> 0"),
    "scenario.slit_separation": KeySpec(float, defaults.SLIT_SEPARATION, _positive, "> 0"),
    "scenario.edge_order": KeySpec(int, defaults.EDGE_ORDER, lambda v: v >= 2 and v % 2 == 0, "even and >= 2"),
    "scenario.dt": KeySpec(float, None, _positive, "> 0", nullable=True),
    "units.regime": KeySpec(str, defaults.REGIME, lambda v: v in [k.value for k in RegimeKind],
                            f"one of {[k.value for k in RegimeKind]}"),
    "units.eikonal": KeySpec(bool, False),
    "units.wave_coupling": KeySpec(float, 1.0, lambda v: math.isfinite(v) and v >= 0, ">= 0"),
    "units.lambda0_over_w0": KeySpec(float, defaults.LAMBDA0_OVER_W0, _positive, "> 0"),
    "units.pc_over_rest_energy": KeySpec(float, defaults.PC_OVER_REST_ENERGY, _positive, "> 0"),
    "units.rest_mass": KeySpec(float, defaults.REST_MASS, lambda v: v in (0.0, 1.0), "0 (massless) or 1"),
    "potential.kind": KeySpec(str, "free", lambda v: v in POTENTIAL_KINDS, f"one of {POTENTIAL_KINDS}"),
    "potential.file": KeySpec(str, None, nullable=True),
    "potential.slope_x": KeySpec(float, 0.0, math.isfinite, "finite"),
    "potential.slope_z": KeySpec(float, 0.0, math.isfinite, "finite"),
    "potential.offset": KeySpec(float, 0.0, math.isfinite, "finite"),
    "potential.stiffness": KeySpec(float, 1.0, math.isfinite, "finite"),
    "potential.center": KeySpec(float, 0.0, math.isfinite, "finite"),
    "potential.height": KeySpec(float, 1.0, math.isfinite, "finite"),
    "potential.position": KeySpec(float, 0.0, math.isfinite, "finite"),
    "potential.width": KeySpec(float, math.inf, lambda v: v > 0, "> 0 (inf for a single step)"),
    "potential.smoothing": KeySpec(float, 0.02, _positive, "> 0"),
    "potential.axis": KeySpec(str, "z", lambda v: v in ("x", "z"), "'x' or 'z'"),
    "output.dir": KeySpec(str, defaults.OUTPUT_DIR, lambda v: bool(v.strip()), "non-empty"),
    "output.emit_svg": KeySpec(bool, defaults.EMIT_SVG),
    "output.snapshot_every": KeySpec(int, defaults.SNAPSHOT_EVERY, lambda v: v >= 1, ">= 1"),
    "comparator.enabled": KeySpec(bool, defaults.COMPARATOR_ENABLED),
    "comparator.points": KeySpec(int, defaults.COMPARATOR_POINTS, lambda v: v >= 64, ">= 64"),
    "comparator.box_length": KeySpec(float, defaults.COMPARATOR_BOX_LENGTH, _positive, "> 0"),
    "comparator.state": KeySpec(str, defaults.COMPARATOR_STATE,
                                lambda v: v in ("packet", "mode", "superposition", "double_slit"),
                                "packet, mode, superposition or double_slit"),
    "comparator.sigma0": KeySpec(float, defaults.COMPARATOR_SIGMA0, _positive, "> 0"),
    "comparator.k0": KeySpec(float, defaults.COMPARATOR_K0, math.isfinite, "finite"),
    "comparator.x0": KeySpec(float, defaults.COMPARATOR_X0, math.isfinite, "finite"),
    "comparator.modes": KeySpec(list, list(defaults.COMPARATOR_MODES),
                                lambda v: len(v) > 0 and all(n >= 1 for n in v), "positive integers"),
    "comparator.dt": KeySpec(float, defaults.COMPARATOR_DT, _positive, "> 0"),
    "comparator.steps": KeySpec(int, defaults.COMPARATOR_STEPS, lambda v: v >= 2, ">= 2"),
    "comparator.seeds": KeySpec(int, defaults.COMPARATOR_SEEDS, lambda v: v >= 1, ">= 1"),
}

POTENTIAL_PARAMS = {
    "free": (),
    "linear_ramp": ("slope_x", "slope_z", "offset"),
    "harmonic": ("stiffness", "center"),
    "step_smoothed": ("height", "position", "width", "smoothing", "axis"),
    "custom_tabulated": ("file",),
}


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    output_dir: str = defaults.OUTPUT_DIR
    emit_svg: bool = defaults.EMIT_SVG
    comparator: ComparatorConfig = field(default_factory=ComparatorConfig)

    @property
    def snapshot_every(self):
        return self.scenario.snapshot_every


def _key_lines(text):
    """Dotted key -> 1-based line of its value, from the YAML node tree"""
    lines = {}
    root = yaml.compose(text)
    if not isinstance(root, yaml.MappingNode):
        return lines

    def walk(node, prefix):
        for key_node, value_node in node.value:
            key = f"{prefix}{key_node.value}"
            lines[key] = key_node.start_mark.line + 1
            if isinstance(value_node, yaml.MappingNode) and not prefix:
                walk(value_node, f"{key}.")

    walk(root, "")
    return lines


def _flatten(document, lines):
    if document is None:
        return {}
    if not isinstance(document, dict):
        raise ConfigError("top level of a run config must be a mapping", line=1)
    flat = {}
    for key, value in document.items():
        key = str(key)
        if key in SECTIONS and isinstance(value, dict):
            items = ((f"{key}.{sub}", sub_value) for sub, sub_value in value.items())
        else:
            items = ((key, value),)
        for dotted, item in items:
            if dotted in flat:
                raise ConfigError("key given twice (flat and nested)", key=dotted,
                                  line=lines.get(dotted))
            flat[dotted] = item
    return flat


def _coerce(key, value, key_spec, line):
    def fail(expected):
        raise ConfigError(f"expected {expected}, got {value!r}", key=key, line=line)

    if value is None:
        if key_spec.nullable:
            return None
        fail(key_spec.kind.__name__)
    if key_spec.kind is bool:
        if not isinstance(value, bool):
            fail("true or false")
    elif key_spec.kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            fail("an integer")
    elif key_spec.kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail("a number")
        value = float(value)
        if math.isnan(value):
            fail("a number")
    elif key_spec.kind is str:
        if not isinstance(value, str):
            fail("a string")
    elif key_spec.kind is list:
        if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, int)
                                              for v in value):
            fail("a list of integers")
        value = list(value)

    if key_spec.check is not None and not key_spec.check(value):
        raise ConfigError(f"value {value!r} out of range (must be {key_spec.bound})", key=key, line=line)
    return value


def _potential(values, given, lines, base_dir):
    kind = values["potential.kind"]
    allowed = POTENTIAL_PARAMS[kind]
    for key in given:
        if key.startswith("potential.") and key != "potential.kind" \
                and key.split(".", 1)[1] not in allowed:
            raise ConfigError(f"does not apply to potential kind '{kind}'", key=key,
                              line=lines.get(key))
    if kind == "custom_tabulated":
        source = values["potential.file"]
        if not source:
            raise ConfigError("custom_tabulated needs potential.file", key="potential.kind",
                              line=lines.get("potential.kind"))
        path = Path(source)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return PotentialField("custom_tabulated", source=str(path))
    params = tuple((name, values[f"potential.{name}"]) for name in allowed)
    try:
        return PotentialField(kind, params)
    except ValueError as e:
        raise ConfigError(str(e), key="potential.kind", line=lines.get("potential.kind")) from e


def parse_run_config(text, *, base_dir=None):
    """
    Parse and validate a run-configuration document

    Args:
        text (str): YAML document
        base_dir (str | Path): directory that relative potential files resolve against

    Returns:
        RunConfig

    Raises:
        ConfigError: syntax error, unknown key, wrong type or range violation
    """
    try:
        lines = _key_lines(text)
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(f"not a valid YAML document: {getattr(e, 'problem', e)}",
                          line=mark.line + 1 if mark else None) from None

    given = _flatten(document, lines)
    for key in given:
        if key not in SCHEMA:
            nearest = difflib.get_close_matches(key, SCHEMA.keys(), n=1, cutoff=0.0)
            hint = f"; did you mean '{nearest[0]}'?" if nearest else ""
            raise ConfigError(f"unknown key{hint}", key=key, line=lines.get(key))

    values = {}
    for key, key_spec in SCHEMA.items():
        if key in given:
            values[key] = _coerce(key, given[key], key_spec, lines.get(key))
        else:
            values[key] = list(key_spec.default) if key_spec.kind is list else key_spec.default

    try:
        regime = Regime(RegimeKind(values["units.regime"]), values["units.eikonal"],
                        values["units.wave_coupling"])
        scenario = ScenarioConfig(
            scenario=values["scenario.name"],
            n_rays=values["scenario.n_rays"],
            half_width=values["scenario.half_width"],
            z_max_rayleigh=values["scenario.z_max_rayleigh"],
            regime=regime,
            lambda0_over_w0=values["units.lambda0_over_w0"],
            pc_over_rest_energy=values["units.pc_over_rest_energy"],
            rest_mass=values["units.rest_mass"],
            slit_width=values["scenario.slit_width"],
            slit_separation=values["scenario.slit_separation"],
            edge_order=values["scenario.edge_order"],
            snapshot_every=values["output.snapshot_every"],
            dt=values["scenario.dt"],
            potential=_potential(values, given, lines, base_dir),
        )
        # The double_slit state shares the scenario slit geometry
        comparator = ComparatorConfig(
            slit_width=scenario.slit_width,
            slit_separation=scenario.slit_separation,
            edge_order=scenario.edge_order,
            **{key.split(".", 1)[1]: value for key, value in values.items()
               if key.startswith("comparator.")},
        )
    except ConfigError as e:
        if e.line is not None or e.key is None:
            raise
        raise ConfigError(e.message, key=e.key, line=lines.get(e.key)) from None

    return RunConfig(
        scenario=scenario,
        output_dir=values["output.dir"],
        emit_svg=values["output.emit_svg"],
        comparator=comparator,
    )


def load_run_config(path):
    """Read and parse a config file; relative potential files resolve next to it"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    return parse_run_config(text, base_dir=path.parent)


def serialize_run_config(cfg):
    """YAML text that parses back to an equal RunConfig"""
    scenario = cfg.scenario
    potential = scenario.potential
    potential_section = {"kind": potential.kind}
    if potential.kind == "custom_tabulated":
        potential_section["file"] = potential.source
    else:
        potential_section.update(dict(potential.params))

    document = {
        "scenario": {
            "name": scenario.scenario,
            "n_rays": scenario.n_rays,
            "half_width": scenario.half_width,
            "z_max_rayleigh": scenario.z_max_rayleigh,
            "slit_width": scenario.slit_width,
            "slit_separation": scenario.slit_separation,
            "edge_order": scenario.edge_order,
            "dt": scenario.dt,
        },
        "units": {
            "regime": scenario.regime.kind.value,
            "eikonal": scenario.regime.eikonal,
            "wave_coupling": scenario.regime.wave_coupling,
            "lambda0_over_w0": scenario.lambda0_over_w0,
            "pc_over_rest_energy": scenario.pc_over_rest_energy,
            "rest_mass": scenario.rest_mass,
        },
        "potential": potential_section,
        "output": {
            "dir": cfg.output_dir,
            "emit_svg": cfg.emit_svg,
            "snapshot_every": scenario.snapshot_every,
        },
        "comparator": {
            "enabled": cfg.comparator.enabled,
            "points": cfg.comparator.points,
            "box_length": cfg.comparator.box_length,
            "state": cfg.comparator.state,
            "sigma0": cfg.comparator.sigma0,
            "k0": cfg.comparator.k0,
            "x0": cfg.comparator.x0,
            "modes": list(cfg.comparator.modes),
            "dt": cfg.comparator.dt,
            "steps": cfg.comparator.steps,
            "seeds": cfg.comparator.seeds,
        },
    }
    return yaml.safe_dump(document, sort_keys=False)
