"""Command line: simulate campaigns, verify traces, export the catalog.

Exit codes are the machine contract: 0 ok, 1 a requirement failed,
2 bad input (config, spec or trace format), 3 insufficient data.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .catalog import builtin_catalog, catalog_text
from .config import ConfigError, RunConfig, load_config, parse_config, parse_fault_flags
from .dsl import SpecSyntaxError, parse_spec
from .monitor import DEFAULT_N_MIN, MonitorError, TraceView, evaluate
from .report import build_rows, exit_code, render_json, render_table, report_dict
from .sim.campaign import iter_campaign
from .sim.trial import ScenarioError
from .trace import SchemaError, dumps_trace, loads_trace

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INSUFFICIENT = 0, 1, 2, 3
MANIFEST = "manifest.json"
TRACE_GLOB = "trial_*.jsonl"


def trace_filename(trial_id: int) -> str:
    return f"trial_{trial_id:05d}.jsonl"


def write_atomic(path: Path, data: str) -> None:
    """Write ``data`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def use_color() -> bool:
    return not os.environ.get("GRIPCHECK_NO_COLOR") and sys.stdout.isatty()


def fail_input(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_INPUT)


@click.group()
@click.version_option(__version__, prog_name="gripcheck")
def main() -> None:
    """Requirement-driven verification for a soft pneumatic gripper."""


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Campaign TOML. Defaults to the bundled golden campaign.")
@click.option("--seed", type=int, help="Campaign seed (overrides the config).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True,
              help="Directory for trace files and the manifest.")
@click.option("--fault", "fault_flags", multiple=True, metavar="KEY=VALUE",
              help="Fault knob: overpressure, degradation, collision_bug, speed_violation. Repeatable.")
@click.option("--trials-per-class", type=int, help="Trials per item class (overrides the config).")
@click.option("--workers", type=int, default=1, show_default=True, help="Worker processes.")
def simulate(config_path: Optional[Path], seed: Optional[int], out_dir: Path, fault_flags: tuple[str, ...],
             trials_per_class: Optional[int], workers: int) -> None:
    """Run a seeded campaign and write one JSONL trace per trial.

    Existing trial_*.jsonl files in the output directory are replaced.
    """
    try:
        if config_path is None:
            cfg = parse_config(resources.files("gripcheck.data").joinpath("golden.toml").read_text("utf-8"))
            config_name = "golden.toml (bundled)"
        else:
            cfg = load_config(config_path)
            config_name = config_path.name
        faults = parse_fault_flags(fault_flags, cfg.faults)
        if trials_per_class is not None and trials_per_class < 1:
            raise ConfigError("--trials-per-class must be positive")
    except ConfigError as e:
        fail_input(str(e))
    cfg = RunConfig(cfg.gripper, cfg.seed if seed is None else seed,
                    cfg.trials_per_class if trials_per_class is None else trials_per_class,
                    cfg.hours_horizon, cfg.sample_period_s, faults)

    out_dir.mkdir(parents=True, exist_ok=True)
    for stale in out_dir.glob(TRACE_GLOB):
        stale.unlink()
    files, errors = [], []
    for result in iter_campaign(cfg.campaign(), workers):
        if isinstance(result, ScenarioError):
            errors.append({"trial_id": result.trial_id, "reason": result.reason})
            continue
        name = trace_filename(result.trial_meta.trial_id)
        write_atomic(out_dir / name, dumps_trace(result))
        files.append(name)
    manifest = {
        "tool": "gripcheck",
        "version": __version__,
        "config": config_name,
        "config_hash": cfg.digest(),
        "seed": cfg.seed,
        "trials": len(files) + len(errors),
        "faults": faults.as_dict(),
        "files": files,
        "scenario_errors": errors,
    }
    write_atomic(out_dir / MANIFEST, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    click.echo(f"wrote {len(files)} traces to {out_dir}" + (f" ({len(errors)} infeasible)" if errors else ""))


def _load_spec(spec_path: Optional[Path]):
    if spec_path is None:
        return builtin_catalog()
    try:
        data = spec_path.read_bytes()
    except OSError as e:
        fail_input(f"cannot read spec {spec_path}: {e.strerror or e}")
    try:
        return parse_spec(data, name=spec_path.stem)
    except SpecSyntaxError as e:
        for err in e.errors:
            click.echo(f"{spec_path}:{err}", err=True)
        fail_input(f"{len(e.errors)} error(s) in {spec_path}")


def _load_views(trace_dir: Path) -> tuple[list[TraceView], int]:
    if not trace_dir.is_dir():
        fail_input(f"trace directory not found: {trace_dir}")
    paths = sorted(p for p in trace_dir.glob("*.jsonl") if p.is_file())
    if not paths:
        fail_input(f"no .jsonl traces in {trace_dir}")
    views = []
    for p in paths:
        try:
            views.append(TraceView(loads_trace(p.read_bytes()), name=p.name))
        except SchemaError as e:
            fail_input(f"{p.name}:{e.line or '-'}: {e.reason}")
    errors = 0
    manifest = trace_dir / MANIFEST
    if manifest.is_file():
        try:
            errors = len(json.loads(manifest.read_text("utf-8")).get("scenario_errors", []))
        except (ValueError, AttributeError):
            fail_input(f"{manifest} is not a valid manifest")
    return views, errors


@main.command()
@click.option("--spec", "spec_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Requirement document (.gspec). Defaults to the built-in catalog.")
@click.option("--traces", "trace_dir", type=click.Path(file_okay=False, path_type=Path), required=True,
              help="Directory of JSONL traces.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Where to write the report.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True,
              help="Report file format.")
@click.option("--nmin", type=click.IntRange(min=1), default=DEFAULT_N_MIN, show_default=True,
              help="Minimum applicable trials for a statistical verdict.")
def verify(spec_path: Optional[Path], trace_dir: Path, report_path: Optional[Path], fmt: str, nmin: int) -> None:
    """Evaluate every requirement over a directory of traces."""
    doc = _load_spec(spec_path)
    views, n_errors = _load_views(trace_dir)
    try:
        results = evaluate(doc, views, nmin)
    except MonitorError as e:
        fail_input(str(e))
    rows = build_rows(results, [v.name for v in views], [v.n_events for v in views])
    report = report_dict(rows, doc.name, len(views), nmin, n_errors)
    if report_path is not None:
        write_atomic(report_path, render_json(report) if fmt == "json" else render_table(rows))
    click.echo(render_table(rows, color=use_color()), nl=False)
    sys.exit(exit_code(rows))


@main.command()
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Output .gspec file; prints to stdout when omitted.")
def catalog(out_path: Optional[Path]) -> None:
    """Export the built-in requirement catalog as .gspec text."""
    text = catalog_text()
    if out_path is None:
        click.echo(text, nl=False)
        return
    try:
        write_atomic(out_path, text)
    except OSError as e:
        fail_input(f"cannot write {out_path}: {e.strerror or e}")


if __name__ == "__main__":
    main()
