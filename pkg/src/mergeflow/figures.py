"""Figure rendering for runs and comparisons.

Everything here draws to files, never to a window, so the module forces
the Agg backend on import and stays usable in headless environments.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .output import time_label
from .simulation import ComparisonReport, SimulationResult


def _profile_axes(result: SimulationResult):
    fig, (ax_in, ax_out) = plt.subplots(1, 2, figsize=(9.0, 3.4), sharey=True)
    top = 1.05 * max(spec.diagram.rho_max for spec in result.scenario.roads)
    for ax in (ax_in, ax_out):
        ax.set_ylim(0.0, top)
        ax.set_xlabel("x")
        ax.grid(alpha=0.3)
    ax_in.set_ylabel("density")
    ax_in.set_title("incoming roads")
    ax_out.set_title("outgoing road")
    return fig, ax_in, ax_out


def profile_figure(result: SimulationResult, t: float):
    """Densities of all three roads at one snapshot time."""
    fig, ax_in, ax_out = _profile_axes(result)
    rho = result.snapshots[t]
    ax_in.plot(result.grids[0].centers, rho[0], color="tab:blue", label="road 1")
    ax_in.plot(result.grids[1].centers, rho[1], color="tab:red", label="road 2")
    ax_out.plot(result.grids[2].centers, rho[2], color="tab:green", label="road 3")
    ax_in.legend(loc="best")
    fig.suptitle(f"{result.solver} solver, t = {time_label(t)}")
    fig.tight_layout()
    return fig


def comparison_figure(report: ComparisonReport, t: float):
    """Both solvers overlaid at one snapshot time (classical dashed)."""
    fig, ax_in, ax_out = _profile_axes(report.relaxation)
    styles = (("relaxation", report.relaxation, "-"), ("classical", report.classical, "--"))
    colors = ("tab:blue", "tab:red", "tab:green")
    for name, result, ls in styles:
        rho = result.snapshots[t]
        for k, ax in ((0, ax_in), (1, ax_in), (2, ax_out)):
            ax.plot(
                result.grids[k].centers,
                rho[k],
                ls,
                color=colors[k],
                label=f"road {k + 1} ({name})",
            )
    ax_in.legend(loc="best", fontsize="small")
    ax_out.legend(loc="best", fontsize="small")
    fig.suptitle(f"solver comparison, t = {time_label(t)}")
    fig.tight_layout()
    return fig


def flux_figure(result: SimulationResult):
    """Junction flux of each road against time."""
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    for k, (color, label) in enumerate(
        zip(("tab:blue", "tab:red", "tab:green"), ("f1", "f2", "f3"))
    ):
        ax.plot(result.times, result.junction_fluxes[:, k], color=color, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("junction flux")
    ax.grid(alpha=0.3)
    ax.legend(loc="best")
    ax.set_title(f"{result.solver} solver")
    fig.tight_layout()
    return fig


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_run_figures(result: SimulationResult, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for t in sorted(result.snapshots):
        written.append(_save(profile_figure(result, t), outdir / f"profiles_t{time_label(t)}.png"))
    written.append(_save(flux_figure(result), outdir / "junction_fluxes.png"))
    return written


def render_comparison_figures(report: ComparisonReport, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    written += render_run_figures(report.relaxation, outdir / "relaxation")
    written += render_run_figures(report.classical, outdir / "classical")
    for t in sorted(report.relaxation.snapshots):
        written.append(
            _save(comparison_figure(report, t), outdir / f"comparison_t{time_label(t)}.png")
        )
    return written
