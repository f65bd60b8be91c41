"""Time integration of the merge network and solver comparison runs.

A Scenario bundles the three roads (fundamental diagram plus initial
profile each), the grid resolution and the scheme parameters.  run()
integrates it with one nodal solver and returns a SimulationResult with
the final state, snapshots, the junction flux series and diagnostic
aggregates (mass balance, density bounds, branch histogram, balance
residuals).  compare() runs both solvers on the same scenario and
reports difference norms.

The network geometry is fixed: roads 1 and 2 occupy (-1, 0) and feed the
node at x = 0, road 3 occupies (0, 1).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .fundamentals import BOUND_SLACK, FundamentalDiagram
from .scheme import RoadGrid, SchemeParams, step_network, time_step

X_LEFT, X_NODE, X_RIGHT = -1.0, 0.0, 1.0
PRESET_NAMES = ("exp1", "exp2", "exp3")
SOLVER_CHOICES = ("relaxation", "classical", "both")

Segments = tuple[tuple[float, float, float], ...]


@dataclass(frozen=True)
class RoadSpec:
    """One road: fundamental diagram and initial density profile.

    The profile is either a constant or a tuple of (from, to, value)
    segments that must tile the road's interval without gaps.
    """

    diagram: FundamentalDiagram
    initial: float | Segments


def _validate_profile(spec: RoadSpec, a: float, b: float, where: str) -> None:
    rho_max = spec.diagram.rho_max
    if isinstance(spec.initial, (int, float)) and not isinstance(spec.initial, bool):
        value = float(spec.initial)
        if not np.isfinite(value) or value < -BOUND_SLACK or value > rho_max + BOUND_SLACK:
            raise ConfigError(f"{where}.initial: density {value!r} outside [0, {rho_max}]")
        return
    segments = spec.initial
    if not segments:
        raise ConfigError(f"{where}.initial: needs at least one segment")
    tol = 1e-9
    cursor = a
    for i, seg in enumerate(segments):
        if len(seg) != 3:
            raise ConfigError(f"{where}.initial[{i}]: expected (from, to, value)")
        lo, hi, value = (float(x) for x in seg)
        if not (np.isfinite(lo) and np.isfinite(hi) and np.isfinite(value)):
            raise ConfigError(f"{where}.initial[{i}]: entries must be finite")
        if not hi > lo:
            raise ConfigError(f"{where}.initial[{i}]: needs from < to")
        if abs(lo - cursor) > tol:
            raise ConfigError(
                f"{where}.initial[{i}]: starts at {lo}, expected {cursor} (segments must tile the road)"
            )
        if value < -BOUND_SLACK or value > rho_max + BOUND_SLACK:
            raise ConfigError(f"{where}.initial[{i}].value: {value!r} outside [0, {rho_max}]")
        cursor = hi
    if abs(cursor - b) > tol:
        raise ConfigError(f"{where}.initial: segments end at {cursor}, road ends at {b}")


def _sample_profile(spec: RoadSpec, a: float, b: float, centers: np.ndarray) -> np.ndarray:
    if isinstance(spec.initial, (int, float)) and not isinstance(spec.initial, bool):
        return np.full(centers.size, float(spec.initial))
    segments = spec.initial
    starts = np.array([float(seg[0]) for seg in segments])
    values = np.array([float(seg[2]) for seg in segments])
    idx = np.clip(np.searchsorted(starts, centers, side="right") - 1, 0, len(segments) - 1)
    return values[idx]


@dataclass(frozen=True)
class Scenario:
    """Complete description of one network run."""

    roads: tuple[RoadSpec, RoadSpec, RoadSpec]
    final_time: float
    cells: int = 1000
    cfl: float = 0.9
    lam: float | None = None
    solver: str = "relaxation"
    snapshots: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        roads = tuple(self.roads)
        if len(roads) != 3 or not all(isinstance(r, RoadSpec) for r in roads):
            raise ConfigError("roads: expected exactly three RoadSpec entries")
        object.__setattr__(self, "roads", roads)
        for i, spec in enumerate(roads):
            a, b = (X_LEFT, X_NODE) if i < 2 else (X_NODE, X_RIGHT)
            _validate_profile(spec, a, b, f"roads[{i}]")
        if isinstance(self.cells, bool) or not isinstance(self.cells, int) or self.cells < 1:
            raise ConfigError(f"cells: expected a positive integer, got {self.cells!r}")
        if not np.isfinite(self.final_time) or self.final_time <= 0.0:
            raise ConfigError(f"final_time: must be positive, got {self.final_time!r}")
        if not np.isfinite(self.cfl) or not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl: must lie in (0, 1], got {self.cfl!r}")
        v_top = max(spec.diagram.v_max for spec in roads)
        if self.lam is not None:
            lam = float(self.lam)
            if not np.isfinite(lam) or lam <= 0.0:
                raise ConfigError(f"lambda: must be positive, got {self.lam!r}")
            if lam < v_top:
                raise ConfigError(
                    f"lambda: {lam} violates the subcharacteristic condition (max v_max = {v_top})"
                )
            object.__setattr__(self, "lam", lam)
        if self.solver not in SOLVER_CHOICES:
            raise ConfigError(f"solver: expected one of {SOLVER_CHOICES}, got {self.solver!r}")
        snaps = tuple(float(s) for s in self.snapshots)
        for s in snaps:
            if not np.isfinite(s) or s < 0.0 or s > self.final_time:
                raise ConfigError(f"snapshots: {s!r} outside [0, {self.final_time}]")
        object.__setattr__(self, "snapshots", tuple(sorted(set(snaps))))

    @property
    def resolved_lam(self) -> float:
        if self.lam is not None:
            return self.lam
        return max(spec.diagram.v_max for spec in self.roads)

    @property
    def params(self) -> SchemeParams:
        return SchemeParams(lam=self.resolved_lam, cfl=self.cfl)


def build_grids(scenario: Scenario) -> list[RoadGrid]:
    """Sample the initial profiles onto the three road grids."""
    grids = []
    for i, spec in enumerate(scenario.roads):
        a, b = (X_LEFT, X_NODE) if i < 2 else (X_NODE, X_RIGHT)
        centers = a + (np.arange(scenario.cells) + 0.5) * ((b - a) / scenario.cells)
        grids.append(
            RoadGrid(
                diagram=spec.diagram,
                x_left=a,
                x_right=b,
                cells=_sample_profile(spec, a, b, centers),
            )
        )
    return grids


def total_mass(grids) -> float:
    """Exact-summation total mass over all roads."""
    return math.fsum(g.dx * math.fsum(g.cells) for g in grids)


@dataclass(frozen=True)
class SimulationResult:
    scenario: Scenario
    solver: str
    grids: list[RoadGrid] = field(repr=False)
    snapshots: dict[float, list[np.ndarray]] = field(repr=False)
    times: np.ndarray = field(repr=False)
    junction_fluxes: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    branch_counts: dict[str, int]
    fallback_count: int
    steps: int
    mass_initial: float
    mass_final: float
    outflow_total: float
    mass_defect: float
    density_min: tuple[float, float, float]
    density_max: tuple[float, float, float]
    wall_time: float

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    @property
    def final_residual(self) -> float:
        return float(self.residuals[-1]) if self.residuals.size else 0.0


def run(scenario: Scenario, solver: str | None = None) -> SimulationResult:
    """Integrate the scenario up to final_time with one nodal solver.

    Snapshot times and the final time are hit exactly by truncating the
    last step before each target.
    """
    chosen = solver if solver is not None else scenario.solver
    if chosen == "both":
        raise ConfigError("run() integrates a single solver; use compare() for both")
    if chosen not in ("relaxation", "classical"):
        raise ConfigError(f"solver: expected 'relaxation' or 'classical', got {chosen!r}")

    started = time.perf_counter()
    grids = build_grids(scenario)
    params = scenario.params
    dt_nominal = time_step(params, min(g.dx for g in grids))

    snapshots: dict[float, list[np.ndarray]] = {}
    targets = sorted(set(scenario.snapshots) | {scenario.final_time})
    if targets and targets[0] == 0.0:
        snapshots[0.0] = [g.cells.copy() for g in grids]
        targets = targets[1:]

    dens_min = [float(np.min(g.cells)) for g in grids]
    dens_max = [float(np.max(g.cells)) for g in grids]
    mass_initial = total_mass(grids)

    times: list[float] = []
    fluxes: list[tuple[float, float, float]] = []
    residuals: list[float] = []
    outflow_terms: list[float] = []
    branch_counts: dict[str, int] = {}
    steps = 0

    t = 0.0
    for target in targets:
        while t < target:
            dt = dt_nominal
            aimed = t + dt >= target - 1e-12 * max(1.0, target)
            if aimed:
                dt = target - t
            grids, coupling, outflow = step_network(grids, params, dt, chosen)
            times.append(t)
            fluxes.append(coupling.f_c)
            residuals.append(coupling.kirchhoff_residual)
            outflow_terms.append(dt * outflow)
            branch_counts[coupling.branch] = branch_counts.get(coupling.branch, 0) + 1
            for k, g in enumerate(grids):
                dens_min[k] = min(dens_min[k], float(np.min(g.cells)))
                dens_max[k] = max(dens_max[k], float(np.max(g.cells)))
            steps += 1
            t = target if aimed else t + dt
        snapshots[target] = [g.cells.copy() for g in grids]

    mass_final = total_mass(grids)
    outflow_total = math.fsum(outflow_terms)
    fallback_count = sum(n for name, n in branch_counts.items() if name.startswith("fallback"))
    return SimulationResult(
        scenario=scenario,
        solver=chosen,
        grids=grids,
        snapshots=snapshots,
        times=np.array(times),
        junction_fluxes=np.array(fluxes).reshape(steps, 3),
        residuals=np.array(residuals),
        branch_counts=branch_counts,
        fallback_count=fallback_count,
        steps=steps,
        mass_initial=mass_initial,
        mass_final=mass_final,
        outflow_total=outflow_total,
        mass_defect=mass_final - mass_initial + outflow_total,
        density_min=tuple(dens_min),
        density_max=tuple(dens_max),
        wall_time=time.perf_counter() - started,
    )


def relative_l1(a: np.ndarray, b: np.ndarray) -> float:
    """sum |a - b| over max of the two absolute sums; 0 when both vanish."""
    num = float(np.sum(np.abs(np.asarray(a) - np.asarray(b))))
    den = max(float(np.sum(np.abs(a))), float(np.sum(np.abs(b))))
    return num / den if den > 0.0 else 0.0


def relative_linf(a: np.ndarray, b: np.ndarray) -> float:
    num = float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))
    den = max(
        float(np.max(np.abs(a), initial=0.0)),
        float(np.max(np.abs(b), initial=0.0)),
    )
    return num / den if den > 0.0 else 0.0


@dataclass(frozen=True)
class ComparisonReport:
    scenario: Scenario
    relaxation: SimulationResult
    classical: SimulationResult
    rel_l1: tuple[float, float, float]
    rel_linf: tuple[float, float, float]
    flux_max_abs_diff: tuple[float, float, float]


def compare(scenario: Scenario) -> ComparisonReport:
    """Run both nodal solvers on the same scenario and diff the results.

    Density norms are taken on the final-time profiles road by road; the
    flux column compares the junction flux series, which share the same
    step sequence by construction.
    """
    relax = run(scenario, "relaxation")
    classic = run(scenario, "classical")
    rel_l1 = tuple(
        relative_l1(relax.grids[k].cells, classic.grids[k].cells) for k in range(3)
    )
    rel_linf = tuple(
        relative_linf(relax.grids[k].cells, classic.grids[k].cells) for k in range(3)
    )
    flux_diff = tuple(
        float(np.max(np.abs(relax.junction_fluxes[:, k] - classic.junction_fluxes[:, k]), initial=0.0))
        for k in range(3)
    )
    return ComparisonReport(
        scenario=scenario,
        relaxation=relax,
        classical=classic,
        rel_l1=rel_l1,
        rel_linf=rel_linf,
        flux_max_abs_diff=flux_diff,
    )


_PRESETS = {
    # three-road merge test cases: (initial densities, final time, road-3 rho_max)
    "exp1": ((0.15, 0.2, 0.3), 0.75),
    "exp2": ((0.6, 0.35, 0.35), 1.0),
    "exp3": ((0.5, 0.8, 0.6), 1.0),
}


def preset_scenario(
    name: str,
    *,
    cells: int = 1000,
    cfl: float = 0.9,
    lam: float | None = None,
    solver: str = "both",
    snapshots: tuple[float, ...] = (),
) -> Scenario:
    """Built-in merge test cases on constant initial data.

    All three use unit free speed everywhere, unit maximal density on the
    incoming roads and 1.2 on the outgoing one; they differ in the
    constant initial densities and the horizon: exp1 = (0.15, 0.2, 0.3)
    up to t = 0.75, exp2 = (0.6, 0.35, 0.35) and exp3 = (0.5, 0.8, 0.6)
    up to t = 1.
    """
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}, expected one of {PRESET_NAMES}")
    (rho1, rho2, rho3), final_time = _PRESETS[name]
    incoming = FundamentalDiagram(v_max=1.0, rho_max=1.0)
    outgoing = FundamentalDiagram(v_max=1.0, rho_max=1.2)
    return Scenario(
        roads=(
            RoadSpec(diagram=incoming, initial=rho1),
            RoadSpec(diagram=incoming, initial=rho2),
            RoadSpec(diagram=outgoing, initial=rho3),
        ),
        final_time=final_time,
        cells=cells,
        cfl=cfl,
        lam=lam,
        solver=solver,
        snapshots=snapshots,
    )
