"""Command-line entry point: run, validate and figure"""
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

import click
import numpy as np

from analyzers import (
    ComparatorAnalyzer, ConservationAnalyzer, FringeAnalyzer,
    UncertaintyAnalyzer, WaistLineAnalyzer
)
from comparator.bohm import bohm_columns
from comparator.runner import run_comparator, screen_bundle
from config import defaults
from models.errors import ConfigError, SimulationError, TrajectoryIOError, UnitSystemError
from models.units import RegimeKind, make_unit_system, rayleigh_length
from scenarios.builders import run_scenario
from scoring.run_verdict import RunVerdict
from utils.config_parser import load_run_config
from utils.console import RunConsole, configure_logging
from utils.figure import render_figure
from utils.run_explainer import RunExplainer
from utils.trajectory_io import read_trajectories, write_bohm_trajectories, write_trajectories

summary_lock = threading.Lock()
CHECKS = ("waist_line", "conservation", "uncertainty", "fringes", "bohm_fringes", "comparator")


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _exit_code(exc):
    if isinstance(exc, UnitSystemError):
        return 2
    return getattr(exc, "exit_code", 1)


def _abort(console, exc):
    console.mark("error", f"{type(exc).__name__}: {exc}")
    raise SystemExit(_exit_code(exc))


def run_exact(cfg, summary, console):
    """Exact ray run; fills the run and units sections of the summary"""
    bundle = run_scenario(cfg.scenario)
    u = bundle.units
    with summary_lock:
        summary["units"] = {
            "regime": u.regime.value,
            "lambda0_over_w0": u.lambda0_over_w0,
            "p0": u.p0,
            "E": u.E,
            "c": None if np.isinf(u.c) else u.c,
            "mass": u.mass,
            "rayleigh_length": rayleigh_length(u),
        }
        summary["run"] = dict(bundle.stats)
    console.mark("ok", f"{bundle.scenario}: {bundle.stats['steps']} steps, "
                       f"{len(bundle)} snapshots of {bundle.n_rays} rays")
    return bundle


def run_bohm(cfg, u, summary, console):
    """Comparator run; fills the comparator section of the summary"""
    result = run_comparator(cfg.comparator, u)
    analysis = ComparatorAnalyzer.analyze(result.stats)
    analysis["stats"] = result.stats
    with summary_lock:
        summary["comparator"] = analysis
    console.mark("ok" if analysis["status"] == "OK" else "warn",
                 f"comparator ({result.stats['state']}): {analysis['status']}")
    return result


def analyze_bundle(bundle, summary):
    u = bundle.units
    results = {
        "waist_line": WaistLineAnalyzer.analyze(bundle, u),
        "conservation": ConservationAnalyzer.analyze(bundle),
        "uncertainty": UncertaintyAnalyzer.analyze(bundle, u),
        "fringes": FringeAnalyzer.analyze(bundle, u),
    }
    with summary_lock:
        summary.update(results)


def _print_results(console, summary):
    console.line()
    console.banner("RUN CHECKS")
    for name in CHECKS:
        result = summary.get(name)
        if not result:
            continue
        status = result["status"]
        if status == "NOT_APPLICABLE":
            console.mark("info", f"{name}: not applicable")
        elif status == "OK":
            console.mark("ok", f"{name}: OK")
        elif status == "WARNING":
            console.mark("warn", f"{name}: WARNING")
        else:
            console.mark("error", f"{name}: {status}")
    console.line(f"\n--- Overall: {summary['overall']} ---")


def _write_summary(out_dir, summary):
    path = out_dir / defaults.SUMMARY_FILE
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2, default=_jsonable)
        (out_dir / defaults.REPORT_FILE).write_text(RunExplainer.explain_run(summary) + "\n",
                                                    encoding="utf-8")
    except OSError as e:
        raise TrajectoryIOError(f"cannot write {path}: {e.strerror}") from e
    return path


@click.group()
def cli():
    """Exact wave-trajectory simulator for Helmholtz-like equations"""


@cli.command()
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--output-dir", type=click.Path(file_okay=False), default=None,
              help="Overrides output.dir from the config.")
@click.option("--quiet", is_flag=True, help="Only print errors.")
def run(config, output_dir, quiet):
    """Run the scenario in CONFIG (and the comparator when enabled)."""
    configure_logging(quiet)
    console = RunConsole(quiet)
    try:
        cfg = load_run_config(config)
    except ConfigError as e:
        _abort(console, e)

    out_dir = Path(output_dir or cfg.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        _abort(console, TrajectoryIOError(f"cannot create {out_dir}: {e.strerror}"))

    console.banner("EXACT WAVE-TRAJECTORY RUN")
    scenario = cfg.scenario
    console.mark("info", f"{scenario.scenario}, {scenario.regime.kind.value}, "
                         f"{scenario.n_rays} rays, z_max = {scenario.z_max_rayleigh:g} z_R")

    summary = {"scenario": scenario.echo(), "comparator_enabled": cfg.comparator.enabled}
    start_time = time.time()
    failure = None
    bundle = comparison = None

    try:
        comparator_units = scenario.units() \
            if scenario.regime.kind is RegimeKind.NONRELATIVISTIC else None
    except (UnitSystemError, SimulationError) as e:
        _abort(console, e)

    with ThreadPoolExecutor(max_workers=defaults.MAX_WORKERS) as executor:
        futures = {executor.submit(run_exact, cfg, summary, console): "exact"}
        if cfg.comparator.enabled:
            futures[executor.submit(run_bohm, cfg, comparator_units, summary, console)] = "bohm"
        for future in as_completed(futures):
            try:
                if futures[future] == "exact":
                    bundle = future.result()
                else:
                    comparison = future.result()
            except (SimulationError, ValueError) as e:
                console.mark("error", f"{futures[future]} run failed: {type(e).__name__}: {e}")
                if failure is None:
                    failure = e

    summary["elapsed_seconds"] = round(time.time() - start_time, 3)

    try:
        if failure is not None:
            summary["error"] = {"type": type(failure).__name__, "message": str(failure)}
            summary["overall"] = "ERROR"
            _write_summary(out_dir, summary)
            raise SystemExit(_exit_code(failure))

        analyze_bundle(bundle, summary)
        if comparison is not None and comparison.config.state == "double_slit":
            screen = screen_bundle(comparison, comparator_units)
            summary["bohm_fringes"] = FringeAnalyzer.analyze(screen, screen.units)
        statuses = {name: summary[name]["status"] for name in CHECKS if name in summary}
        summary["overall"] = RunVerdict.calculate_overall(statuses)

        files = {"trajectories": str(out_dir / defaults.TRAJECTORY_FILE)}
        write_trajectories(bundle, out_dir / defaults.TRAJECTORY_FILE)
        if comparison is not None:
            files["bohm_trajectories"] = str(out_dir / defaults.BOHM_FILE)
            write_bohm_trajectories(
                bohm_columns(comparison.history, comparison.paths, None, comparator_units),
                out_dir / defaults.BOHM_FILE)
        if cfg.emit_svg:
            files["figure"] = str(out_dir / defaults.FIGURE_FILE)
            render_figure(bundle, bundle.units, out_dir / defaults.FIGURE_FILE)
        summary["files"] = files
        summary_path = _write_summary(out_dir, summary)
    except (SimulationError, ValueError) as e:
        _abort(console, e)

    _print_results(console, summary)
    console.mark("ok", f"Summary written to {summary_path}")
    console.mark("info", f"Total time: {summary['elapsed_seconds']:.2f} seconds")


@cli.command()
@click.argument("config", type=click.Path(dir_okay=False))
def validate(config):
    """Parse and range-check CONFIG without running it."""
    configure_logging(quiet=True)
    console = RunConsole()
    try:
        cfg = load_run_config(config)
        cfg.scenario.units()
    except (ConfigError, UnitSystemError) as e:
        _abort(console, e)
    console.mark("ok", f"{config} is valid ({cfg.scenario.scenario}, "
                       f"{cfg.scenario.regime.kind.value}, {cfg.scenario.n_rays} rays)")


@cli.command()
@click.argument("csv_file", type=click.Path(dir_okay=False))
@click.argument("out", type=click.Path(dir_okay=False))
@click.option("--lambda0-over-w0", type=float, default=defaults.LAMBDA0_OVER_W0, show_default=True,
              help="Beam ratio the CSV was produced with.")
@click.option("--scenario", type=click.Choice(["gaussian", "single_slit", "double_slit"]),
              default="gaussian", show_default=True)
def figure(csv_file, out, lambda0_over_w0, scenario):
    """Draw the trajectories in CSV_FILE as an SVG at OUT."""
    configure_logging(quiet=False)
    console = RunConsole()
    try:
        u = make_unit_system(lambda0_over_w0, RegimeKind.NONRELATIVISTIC)
        bundle = read_trajectories(csv_file, scenario=scenario, units=u)
        render_figure(bundle, u, out)
    except (UnitSystemError, SimulationError, ValueError) as e:
        _abort(console, e)
    console.mark("ok", f"Figure written to {out}")


if __name__ == "__main__":
    cli()
