"""Shared fixtures and oracle helpers.

The random generators here are seeded at the call sites so every test is
reproducible.  ``exact_flux_preimage`` hunts, in ulp steps, for a density
whose computed flux equals a target bitwise; it underpins the balanced
junction tests where exact float identities matter.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from mergeflow import FundamentalDiagram, JunctionTrace, RoadSpec, Scenario


@pytest.fixture
def d_unit() -> FundamentalDiagram:
    return FundamentalDiagram(v_max=1.0, rho_max=1.0)


@pytest.fixture
def d_wide() -> FundamentalDiagram:
    return FundamentalDiagram(v_max=1.0, rho_max=1.2)


@pytest.fixture
def merge_diagrams(d_unit, d_wide):
    """The diagram triple used by all built-in test cases."""
    return (d_unit, d_unit, d_wide)


def equilibrium_trace(rho, diagrams) -> JunctionTrace:
    return JunctionTrace(
        rho=tuple(float(r) for r in rho),
        v=tuple(d.flux(float(r)) for d, r in zip(diagrams, rho)),
    )


def _ulp_neighbors(x: float, n: int):
    yield x
    up = down = x
    for _ in range(n):
        up = math.nextafter(up, math.inf)
        yield up
        down = math.nextafter(down, -math.inf)
        yield down


def exact_flux_preimage(d: FundamentalDiagram, s: float, n_scan: int = 300) -> float | None:
    """A density on the free branch with flux(rho) == s bitwise, or None."""
    if not 0.0 <= s <= d.capacity:
        return None
    disc = max(1.0 - 4.0 * s / (d.v_max * d.rho_max), 0.0)
    guess = 0.5 * d.rho_max * (1.0 - math.sqrt(disc))
    for cand in _ulp_neighbors(guess, n_scan):
        if 0.0 <= cand <= d.rho_max and float(d.flux(cand)) == s:
            return cand
    return None


def random_diagram(rng: np.random.Generator) -> FundamentalDiagram:
    return FundamentalDiagram(
        v_max=float(rng.uniform(0.5, 2.0)), rho_max=float(rng.uniform(0.5, 2.0))
    )


def random_trace(rng: np.random.Generator):
    """A random trace (not necessarily at equilibrium) with its diagrams and lam.

    The flux variables are drawn in three flavors: exact equilibrium values,
    perturbed equilibrium values, and free draws around the capacity scale.
    """
    diagrams = tuple(random_diagram(rng) for _ in range(3))
    rho = tuple(float(rng.uniform(0.0, d.rho_max)) for d in diagrams)
    flavor = rng.integers(0, 3)
    if flavor == 0:
        v = tuple(d.flux(r) for d, r in zip(diagrams, rho))
    elif flavor == 1:
        v = tuple(
            d.flux(r) + float(rng.uniform(-0.3, 0.3)) * d.capacity
            for d, r in zip(diagrams, rho)
        )
    else:
        v = tuple(float(rng.uniform(-0.5, 1.5)) * d.capacity for d in diagrams)
    lam = max(d.v_max for d in diagrams) * float(rng.uniform(1.0, 2.5))
    return JunctionTrace(rho=rho, v=v), diagrams, lam


def random_balanced_trace(rng: np.random.Generator):
    """Equilibrium trace whose node flux balance holds bitwise (g0 == g1 == 0)."""
    while True:
        diagrams = tuple(random_diagram(rng) for _ in range(3))
        d1, d2, d3 = diagrams
        rho1 = float(rng.uniform(0.05, 0.95) * d1.rho_crit)
        rho2 = float(rng.uniform(0.05, 0.95) * d2.rho_crit)
        s = d1.flux(rho1) + d2.flux(rho2)
        if not 1e-3 <= s <= 0.85 * d3.capacity:
            continue
        rho3 = exact_flux_preimage(d3, s)
        if rho3 is None:
            continue
        return equilibrium_trace((rho1, rho2, rho3), diagrams), diagrams


def random_scenario(rng: np.random.Generator) -> Scenario:
    """Small random network scenario for conservation/bounds properties.

    Kept inside the solvers' operating envelope: the outgoing road's
    capacity at least matches the combined incoming capacity and the
    outgoing data start on the free branch, so the node cannot gridlock.
    (The relaxation coupling has no invariant-domain guarantee when the
    incoming roads jam against a starved node.)
    """
    d1 = FundamentalDiagram(float(rng.uniform(0.9, 1.1)), float(rng.uniform(0.8, 1.3)))
    d2 = FundamentalDiagram(float(rng.uniform(0.9, 1.1)), float(rng.uniform(0.8, 1.3)))
    v3 = float(rng.uniform(0.9, 1.1))
    cap3 = float(rng.uniform(1.0, 1.4)) * (d1.capacity + d2.capacity)
    d3 = FundamentalDiagram(v3, 4.0 * cap3 / v3)
    specs = []
    for i, d in enumerate((d1, d2, d3)):
        a, b = (-1.0, 0.0) if i < 2 else (0.0, 1.0)
        top = 0.6 if i < 2 else 0.45
        if rng.random() < 0.5:
            initial = float(rng.uniform(0.1, top) * d.rho_max)
        else:
            cuts = a + np.sort(rng.uniform(0.1, 0.9, size=int(rng.integers(1, 3))))
            edges = np.concatenate(([a], cuts, [b]))
            initial = tuple(
                (float(lo), float(hi), float(rng.uniform(0.1, top) * d.rho_max))
                for lo, hi in zip(edges[:-1], edges[1:])
            )
        specs.append(RoadSpec(diagram=d, initial=initial))
    lam = None
    if rng.random() < 0.5:
        lam = max(s.diagram.v_max for s in specs) * float(rng.uniform(1.0, 1.6))
    return Scenario(
        roads=tuple(specs),
        final_time=float(rng.uniform(0.2, 0.5)),
        cells=int(rng.integers(16, 48)),
        cfl=float(rng.uniform(0.4, 0.9)),
        lam=lam,
        solver="relaxation",
    )
