#!/usr/bin/env python3
"""
qbsim – ergotropy dynamics of a catalytic spin-chain quantum battery.

USAGE
  # 1) Run a preset (N=3, d_photon=6, h=0.01, t_max=20)
  qbsim run --preset fig2b
  # → runs/fig2b_lambda0.8.csv, fig2b_lambda1.8.csv, fig2b_lambda2.8.csv, fig2b_summary.csv

  # 2) Start from the literal all-vacuum state (a fixed point: W stays 0)
  qbsim run --preset fig2a --initial paper-vacuum

  # 3) Coarser grid, custom output directory, SVG plot of W(t)
  qbsim run --preset fig5a --h 0.02 --tmax 10 --out ./out --plots

  # 4) JSON config (preset or inline scenario block)
  qbsim run --config run.json

  # 5) Print the resolved parameter set without running
  qbsim validate --preset fig4b

  # 6) Cutoff / step-size convergence of one sweep point
  qbsim converge --preset fig2b --value 1.8

EXIT CODES
  0 success, 2 invalid configuration, 3 integrator abort (offending sweep value reported)
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from .helper.colors import Colors
from .helper.config import RunConfig, build_run_config, format_validation_error, load_config_file
from .helper.env import load_repo_dotenv, user_path
from .helper.ui import UI
from .helper.utils import atomic_write_text, csv_text
from .qb.dynamics import Trajectory
from .qb.errors import SweepPointError, UnknownPresetError
from .qb.scenarios import PRESETS, Scenario, SweepResult, convergence_check, run_scenario

load_repo_dotenv()

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATOR = 3

SUMMARY_COLUMNS = ("sweep_param", "sweep_value", "tail_mean_W", "tail_amplitude", "catalyst_drift", "min_eig_global")


# -----------------------------------------------------------------------------
# CLI parsing
# -----------------------------------------------------------------------------


def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="qbsim",
        description="Non-Markovian ergotropy dynamics of a spin-chain quantum battery",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"presets: {', '.join(sorted(PRESETS))}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run a sweep and write CSV (and optional SVG) output")
    p_val = sub.add_parser("validate", help="Validate a configuration and print the resolved parameters")
    p_conv = sub.add_parser("converge", help="Check photon-cutoff and step-size convergence of one sweep point")

    for p in (p_run, p_val, p_conv):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--preset", help="Preset name (fig2a, fig2b, ..., fig5c)")
        src.add_argument("--config", type=Path, help="JSON run configuration")
        p.add_argument("--h", type=float, help="Step size (default 0.01 or QBSIM_H)")
        p.add_argument("--tmax", dest="t_max", type=float, help="Final time (default 20 or QBSIM_TMAX)")
        p.add_argument("--initial", help="paper-vacuum | fock:<n> (default fock:3)")

    for p in (p_run, p_conv):
        p.add_argument("--out", dest="out_dir", help="Output directory (default runs/ or QBSIM_OUT_DIR)")
        p.add_argument("--workers", type=int, help="Concurrent sweep points (default QBSIM_WORKERS)")

    p_run.add_argument("--plots", action="store_true", help="Also write an SVG chart of W(t)")
    p_conv.add_argument("--value", type=float, help="Sweep value to check (default: last one)")
    p_conv.add_argument("--dphoton-ref", dest="d_photon_ref", type=int, help="Reference cutoff (default d_photon+2)")

    args = parser.parse_args(argv)
    if args.preset is None and args.config is None:
        parser.error("one of --preset or --config is required")
    return args


def load_run_config(args: argparse.Namespace) -> RunConfig:
    file_data = load_config_file(user_path(str(args.config))) if args.config else None
    return build_run_config(
        file_data,
        preset=args.preset,
        h=args.h,
        t_max=args.t_max,
        initial=args.initial,
        out_dir=getattr(args, "out_dir", None),
        workers=getattr(args, "workers", None),
        plots=getattr(args, "plots", False),
    )


# -----------------------------------------------------------------------------
# Output
# -----------------------------------------------------------------------------


def trajectory_filename(s: Scenario, value: float) -> str:
    return f"{s.name}_{s.sweep_label}{value:g}.csv"


def trajectory_csv(traj: Trajectory) -> str:
    return csv_text(Trajectory.CSV_COLUMNS, traj.rows().tolist())


def summary_csv(result: SweepResult) -> str:
    label = result.scenario.sweep_label
    rows = [
        (label, float(p.value), p.metrics.tail_mean_W, p.metrics.tail_amplitude,
         p.metrics.catalyst_drift, p.metrics.min_eig_global)
        for p in result.points
    ]
    return csv_text(SUMMARY_COLUMNS, rows)


def write_outputs(result: SweepResult, out_dir: Path, plots: bool) -> list[Path]:
    s = result.scenario
    written = []
    for p in result.points:
        path = out_dir / trajectory_filename(s, p.value)
        atomic_write_text(path, trajectory_csv(p.trajectory))
        written.append(path)

    path = out_dir / f"{s.name}_summary.csv"
    atomic_write_text(path, summary_csv(result))
    written.append(path)

    if plots:
        from .qb.plotting import sweep_svg

        path = out_dir / f"{s.name}_W.svg"
        atomic_write_text(path, sweep_svg(result))
        written.append(path)
    return written


# -----------------------------------------------------------------------------
# Commands
# -----------------------------------------------------------------------------


def cmd_run(cfg: RunConfig, ui: UI) -> int:
    scenario = cfg.resolve()
    out_dir = cfg.resolve_out_dir()
    workers = cfg.resolve_workers(len(scenario.sweep_values))

    values = ", ".join(f"{v:g}" for v in scenario.sweep_values)
    with ui.status(f"{scenario.name}: {scenario.sweep_label} ∈ {{{values}}}, "
                   f"h={scenario.grid.h:g}, t_max={scenario.grid.t_max:g}"):
        result = run_scenario(scenario, workers=workers)

    for p in result.points:
        for w in p.trajectory.warnings:
            ui.warn(f"[qbsim] {scenario.sweep_label}={p.value:g}: {w}")
        m = p.metrics
        ui.log(
            f"{scenario.sweep_label}={p.value:g}  tail_mean_W={m.tail_mean_W:.6f}  "
            f"amplitude={m.tail_amplitude:.6f}  catalyst_drift={m.catalyst_drift:.3e}  min_eig={m.min_eig_global:.3e}"
        )

    for path in write_outputs(result, out_dir, cfg.plots):
        ui.log(f"wrote {path}")
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    scenario = cfg.resolve()
    resolved = scenario.model_dump(mode="json")
    resolved["grid"]["n_steps"] = scenario.grid.n_steps
    resolved["kernel"]["tau_cut"] = scenario.kernel.tau_cut()
    resolved["layout"]["dim"] = scenario.layout.build().dim
    print(json.dumps(resolved, indent=2))
    return EXIT_OK


def cmd_converge(cfg: RunConfig, value: Optional[float], d_photon_ref: Optional[int], ui: UI) -> int:
    scenario = cfg.resolve()
    with ui.status(f"{scenario.name}: convergence check"):
        rep = convergence_check(scenario, value, d_photon_ref=d_photon_ref)
    print(json.dumps({
        "sweep_param": scenario.sweep_label,
        "sweep_value": rep.value,
        "d_photon": rep.d_photon,
        "d_photon_ref": rep.d_photon_ref,
        "h": rep.h,
        "h_ref": rep.h_ref,
        "cutoff_max_dW": rep.cutoff_max_dW,
        "step_max_dW": rep.step_max_dW,
    }, indent=2))
    return EXIT_OK


# -----------------------------------------------------------------------------
# Main
# -----------------------------------------------------------------------------


def _config_error(lines: list[str]) -> int:
    print(f"{Colors.tag()} invalid configuration:", file=sys.stderr)
    for line in lines:
        print(f"  {line}", file=sys.stderr)
    return EXIT_CONFIG


def main(argv: Optional[list[str]] = None) -> int:
    args = parse_args(argv)
    ui = UI()

    try:
        cfg = load_run_config(args)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "converge":
            return cmd_converge(cfg, args.value, args.d_photon_ref, ui)
        return cmd_run(cfg, ui)
    except ValidationError as e:
        return _config_error(format_validation_error(e))
    except UnknownPresetError as e:
        return _config_error([str(e)])
    except SweepPointError as e:
        print(f"{Colors.tag()} integrator aborted at {e.param}={e.value:g}: {e.cause}", file=sys.stderr)
        return EXIT_INTEGRATOR
    except ValueError as e:
        return _config_error([str(e)])


if __name__ == "__main__":
    sys.exit(main())
