"""Macroscopic traffic flow on a two-to-one merge.

The package simulates the scalar conservation-law traffic model on a
small network: two incoming roads joined to one outgoing road at a
single node.  The flux through the node comes from one of two nodal
Riemann solvers, a relaxation-based one that balances velocity and flux
jumps across the node through a scalar quadratic equation, and the
classical demand/supply solver that maximizes the flux subject to
priority ratios.  A first-order finite-volume scheme advances the roads
and a small CLI renders figures and delimited output files.
"""

from .errors import ConfigError, DomainError, MergeflowError
from .fundamentals import FundamentalDiagram
from .junction import (
    CouplingResult,
    JunctionTrace,
    Lemma1Report,
    QuadraticSetup,
    WaveStrengths,
    influx_ratios,
    lemma1_check,
    quadratic_setup,
    solve_classical_rs,
    solve_relaxation_rs,
)
from .scheme import RoadGrid, SchemeParams, interior_flux, step_network, time_step
from .simulation import (
    ComparisonReport,
    RoadSpec,
    Scenario,
    SimulationResult,
    build_grids,
    compare,
    preset_scenario,
    run,
    total_mass,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "ConfigError",
    "CouplingResult",
    "DomainError",
    "FundamentalDiagram",
    "JunctionTrace",
    "Lemma1Report",
    "MergeflowError",
    "QuadraticSetup",
    "RoadGrid",
    "RoadSpec",
    "Scenario",
    "SchemeParams",
    "SimulationResult",
    "WaveStrengths",
    "build_grids",
    "compare",
    "influx_ratios",
    "interior_flux",
    "lemma1_check",
    "preset_scenario",
    "quadratic_setup",
    "run",
    "solve_classical_rs",
    "solve_relaxation_rs",
    "step_network",
    "time_step",
    "total_mass",
    "__version__",
]
