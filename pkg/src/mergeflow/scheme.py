"""First-order finite-volume scheme on the three-road merge network.

Each road is discretized into equal cells.  Interior faces use a
Rusanov-type flux with a fixed dissipation speed lam (which must dominate
every characteristic speed, lam >= max v_max).  The incoming roads end at
the node on their right, the outgoing road starts there on its left; the
node faces take the coupling fluxes of a nodal Riemann solver.  The left
ends of the incoming roads are closed (zero flux), the right end of the
outgoing road copies its last cell into a ghost cell, which reduces the
Rusanov flux to the plain equilibrium flux there.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DomainError
from .fundamentals import BOUND_SLACK, FundamentalDiagram
from .junction import JunctionTrace, solve_classical_rs, solve_relaxation_rs

SOLVERS = ("relaxation", "classical")


@dataclass(frozen=True)
class SchemeParams:
    """Dissipation/relaxation speed and CFL number of the explicit scheme."""

    lam: float = 1.0
    cfl: float = 0.9

    def __post_init__(self) -> None:
        if not np.isfinite(self.lam) or self.lam <= 0.0:
            raise ConfigError(f"lam must be positive, got {self.lam!r}")
        if not np.isfinite(self.cfl) or not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl!r}")


@dataclass(frozen=True)
class RoadGrid:
    """Uniform cell-averaged state of one road on [x_left, x_right]."""

    diagram: FundamentalDiagram
    x_left: float
    x_right: float
    cells: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not self.x_right > self.x_left:
            raise ConfigError("road needs x_right > x_left")
        cells = np.asarray(self.cells, dtype=float)
        if cells.ndim != 1 or cells.size < 1:
            raise ConfigError("cells must be a nonempty 1-d array")
        object.__setattr__(self, "cells", cells)
        if not np.all(np.isfinite(cells)):
            raise DomainError("cell densities must be finite")
        if np.any(cells < -BOUND_SLACK) or np.any(cells > self.diagram.rho_max + BOUND_SLACK):
            raise DomainError("cell densities outside the diagram range")

    @property
    def n_cells(self) -> int:
        return self.cells.size

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.cells.size

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.cells.size) + 0.5) * self.dx


def time_step(params: SchemeParams, dx: float) -> float:
    """Explicit step size cfl * dx / lam."""
    if not dx > 0.0:
        raise ConfigError(f"dx must be positive, got {dx!r}")
    return params.cfl * dx / params.lam


def interior_flux(diagram: FundamentalDiagram, rho_left, rho_right, lam: float):
    """Rusanov-type numerical flux with fixed dissipation speed lam.

    F = (f(rho_left) + f(rho_right)) / 2 - lam (rho_right - rho_left) / 2.
    For equal states it reduces to the exact flux.
    """
    fl = diagram.flux(rho_left)
    fr = diagram.flux(rho_right)
    return 0.5 * (fl + fr) - 0.5 * lam * (np.asarray(rho_right) - np.asarray(rho_left))


def _check_network(grids) -> tuple[RoadGrid, RoadGrid, RoadGrid]:
    grids = tuple(grids)
    if len(grids) != 3:
        raise ConfigError("the merge network has exactly three roads")
    return grids


def step_network(grids, params: SchemeParams, dt: float, solver: str):
    """Advance the network by one explicit step of size dt.

    Returns (new grids, coupling result, outflow flux), the last being the
    flux through the open right end of the outgoing road during this step,
    which a caller can integrate for a mass balance.
    """
    g1, g2, g3 = _check_network(grids)
    if solver not in SOLVERS:
        raise ConfigError(f"unknown solver {solver!r}, expected one of {SOLVERS}")
    if not dt > 0.0:
        raise ConfigError(f"dt must be positive, got {dt!r}")
    v_top = max(g.diagram.v_max for g in (g1, g2, g3))
    if params.lam < v_top:
        raise ConfigError(
            f"subcharacteristic condition violated: lam = {params.lam} < max v_max = {v_top}"
        )

    trace_rho = (g1.cells[-1], g2.cells[-1], g3.cells[0])
    diagrams = (g1.diagram, g2.diagram, g3.diagram)
    if solver == "classical":
        coupling = solve_classical_rs(trace_rho, diagrams)
    else:
        trace = JunctionTrace(
            rho=tuple(float(r) for r in trace_rho),
            v=tuple(d.flux(float(r)) for d, r in zip(diagrams, trace_rho)),
        )
        coupling = solve_relaxation_rs(trace, diagrams, params.lam)

    new_grids = []
    outflow = 0.0
    for k, grid in enumerate((g1, g2, g3)):
        rho = grid.cells
        faces = np.empty(rho.size + 1)
        faces[1:-1] = interior_flux(grid.diagram, rho[:-1], rho[1:], params.lam)
        if k < 2:
            faces[0] = 0.0  # closed upstream end
            faces[-1] = coupling.f_c[k]
        else:
            faces[0] = coupling.f_c[2]
            faces[-1] = grid.diagram.flux(rho[-1])  # ghost cell copies the state
            outflow = faces[-1]
        new_grids.append(replace(grid, cells=rho - (dt / grid.dx) * (faces[1:] - faces[:-1])))
    return new_grids, coupling, outflow
