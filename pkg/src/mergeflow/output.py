"""Delimited output files for runs and comparisons.

Every float is written with repr-faithful precision (17 significant
digits) and LF newlines, so re-running the same scenario reproduces the
files byte for byte.  A run directory contains

    road<k>_t<time>.csv     per snapshot time, columns x,rho
    junction_fluxes.csv     columns t,f1,f2,f3, one row per step
    summary.json            scalar diagnostics

and a comparison directory holds one such tree per solver plus a joint
summary with the difference norms.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ConfigError
from .simulation import ComparisonReport, SimulationResult


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def time_label(t: float) -> str:
    return format(float(t), "g")


def road_csv_name(road: int, t: float) -> str:
    return f"road{road}_t{time_label(t)}.csv"


def write_road_csv(path, centers, densities) -> None:
    lines = ["x,rho"]
    lines.extend(
        f"{format_float(x)},{format_float(r)}" for x, r in zip(centers, densities)
    )
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def write_junction_csv(path, times, fluxes) -> None:
    lines = ["t,f1,f2,f3"]
    lines.extend(
        f"{format_float(t)},{format_float(f1)},{format_float(f2)},{format_float(f3)}"
        for t, (f1, f2, f3) in zip(times, fluxes)
    )
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def run_summary(result: SimulationResult) -> dict:
    scenario = result.scenario
    return {
        "solver": result.solver,
        "cells": scenario.cells,
        "cfl": scenario.cfl,
        "lambda": scenario.resolved_lam,
        "final_time": scenario.final_time,
        "steps": result.steps,
        "wall_time_s": result.wall_time,
        "mass": {
            "initial": result.mass_initial,
            "final": result.mass_final,
            "outflow": result.outflow_total,
            "defect": result.mass_defect,
        },
        "density_min": list(result.density_min),
        "density_max": list(result.density_max),
        "branches": dict(sorted(result.branch_counts.items())),
        "fallback_count": result.fallback_count,
        "balance_residual": {
            "max": result.max_residual,
            "final": result.final_residual,
        },
        "snapshots": [time_label(t) for t in sorted(result.snapshots)],
    }


def comparison_summary(report: ComparisonReport) -> dict:
    return {
        "solver": "both",
        "runs": {
            "relaxation": run_summary(report.relaxation),
            "classical": run_summary(report.classical),
        },
        "differences": {
            "rel_l1": list(report.rel_l1),
            "rel_linf": list(report.rel_linf),
            "junction_flux_max_abs": list(report.flux_max_abs_diff),
        },
    }


def write_summary(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2) + "\n", newline="\n")


def _snapshot_paths(result: SimulationResult, outdir: Path) -> dict[float, list[Path]]:
    paths: dict[float, list[Path]] = {}
    seen: dict[str, float] = {}
    for t in sorted(result.snapshots):
        label = time_label(t)
        if label in seen:
            raise ConfigError(
                f"snapshot times {seen[label]!r} and {t!r} collide in file name t{label}"
            )
        seen[label] = t
        paths[t] = [outdir / road_csv_name(k + 1, t) for k in range(3)]
    return paths


def write_run_outputs(result: SimulationResult, outdir) -> list[Path]:
    """Write all delimited files for one run; returns the paths written."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for t, paths in _snapshot_paths(result, outdir).items():
        for k, path in enumerate(paths):
            write_road_csv(path, result.grids[k].centers, result.snapshots[t][k])
            written.append(path)
    flux_path = outdir / "junction_fluxes.csv"
    write_junction_csv(flux_path, result.times, result.junction_fluxes)
    written.append(flux_path)
    summary_path = outdir / "summary.json"
    write_summary(summary_path, run_summary(result))
    written.append(summary_path)
    return written


def write_comparison_outputs(report: ComparisonReport, outdir) -> list[Path]:
    """One subdirectory per solver plus a joint summary with the norms."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    written += write_run_outputs(report.relaxation, outdir / "relaxation")
    written += write_run_outputs(report.classical, outdir / "classical")
    summary_path = outdir / "summary.json"
    write_summary(summary_path, comparison_summary(report))
    written.append(summary_path)
    return written
