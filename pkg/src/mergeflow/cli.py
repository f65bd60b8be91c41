"""Command line front end.

    mergeflow run --config FILE [--out DIR] [--no-figures]
    mergeflow preset NAME [--solver S] [--cells N] [--cfl C] [--lambda L]
                          [--out DIR] [--no-figures] [--dump-config [PATH]]
    mergeflow compare (--config FILE | --preset NAME) [--cells N] [--cfl C]
                          [--lambda L] [--out DIR] [--no-figures]

Exit codes: 0 on success, 2 for configuration problems (unreadable or
invalid config, bad arguments), 3 for failures during the run itself
(densities leaving the admissible range and the like).

A run with solver "both" is executed as a comparison: one output tree
per solver plus a joint summary with the difference norms.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import DEFAULT_OUTPUT_DIR, dump_config, load_config
from .errors import ConfigError, MergeflowError
from .figures import render_comparison_figures, render_run_figures
from .output import write_comparison_outputs, write_run_outputs
from .simulation import (
    PRESET_NAMES,
    SOLVER_CHOICES,
    Scenario,
    compare,
    preset_scenario,
    run,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mergeflow",
        description="macroscopic traffic simulation on a two-to-one merge",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument(
            "--no-figures", action="store_true", help="write only delimited files"
        )

    def add_override_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cells", type=int, metavar="N", help="cells per road")
        p.add_argument("--cfl", type=float, metavar="C", help="CFL number in (0, 1]")
        p.add_argument(
            "--lambda", dest="lam", type=float, metavar="L",
            help="relaxation/dissipation speed (>= max v_max)",
        )

    p_run = sub.add_parser("run", help="run a scenario from a config file")
    p_run.add_argument("--config", required=True, metavar="FILE")
    add_output_args(p_run)

    p_preset = sub.add_parser("preset", help="run a built-in merge test case")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--solver", choices=SOLVER_CHOICES, default="both")
    add_override_args(p_preset)
    add_output_args(p_preset)
    p_preset.add_argument(
        "--dump-config", nargs="?", const="-", metavar="PATH",
        help="write the scenario as a config file (stdout if no PATH) instead of running",
    )

    p_cmp = sub.add_parser("compare", help="run both nodal solvers and diff them")
    source = p_cmp.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", metavar="FILE")
    source.add_argument("--preset", choices=PRESET_NAMES)
    add_override_args(p_cmp)
    add_output_args(p_cmp)

    return parser


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    from dataclasses import replace

    changes = {}
    if getattr(args, "cells", None) is not None:
        changes["cells"] = args.cells
    if getattr(args, "cfl", None) is not None:
        changes["cfl"] = args.cfl
    if getattr(args, "lam", None) is not None:
        changes["lam"] = args.lam
    return replace(scenario, **changes) if changes else scenario


def _execute(scenario: Scenario, solver: str, outdir: str, figures: bool) -> int:
    out = Path(outdir)
    if solver == "both":
        report = compare(scenario)
        written = write_comparison_outputs(report, out)
        if figures:
            written += render_comparison_figures(report, out)
        for name, result in (("relaxation", report.relaxation), ("classical", report.classical)):
            print(
                f"{name}: {result.steps} steps, mass defect {result.mass_defect:.3e}, "
                f"{result.wall_time:.2f} s"
            )
        print(
            "final-state relative L1 per road: "
            + ", ".join(f"{v:.6e}" for v in report.rel_l1)
        )
    else:
        result = run(scenario, solver)
        written = write_run_outputs(result, out)
        if figures:
            written += render_run_figures(result, out)
        print(
            f"{solver}: {result.steps} steps, mass defect {result.mass_defect:.3e}, "
            f"{result.wall_time:.2f} s"
        )
    print(f"wrote {len(written)} files under {out}")
    return 0


def _cmd_run(args) -> int:
    scenario, config_out = load_config(args.config)
    outdir = args.out if args.out else config_out
    return _execute(scenario, scenario.solver, outdir, not args.no_figures)


def _cmd_preset(args) -> int:
    scenario = preset_scenario(args.name, solver=args.solver)
    scenario = _apply_overrides(scenario, args)
    outdir = args.out if args.out else DEFAULT_OUTPUT_DIR
    if args.dump_config is not None:
        text = dump_config(scenario, outdir)
        if args.dump_config == "-":
            sys.stdout.write(text)
        else:
            Path(args.dump_config).write_text(text, newline="\n")
            print(f"wrote {args.dump_config}")
        return 0
    return _execute(scenario, scenario.solver, outdir, not args.no_figures)


def _cmd_compare(args) -> int:
    if args.config is not None:
        scenario, config_out = load_config(args.config)
        default_out = config_out
    else:
        scenario = preset_scenario(args.preset)
        default_out = DEFAULT_OUTPUT_DIR
    scenario = _apply_overrides(scenario, args)
    outdir = args.out if args.out else default_out
    return _execute(scenario, "both", outdir, not args.no_figures)


_COMMANDS = {"run": _cmd_run, "preset": _cmd_preset, "compare": _cmd_compare}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MergeflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
