"""Greenshields fundamental diagram and the demand/supply splitting.

All roads carry a linear density-velocity law v(rho) = v_max (1 - rho/rho_max),
so the flux rho*v(rho) is a downward parabola with its maximum (the road
capacity) at the critical density rho_max/2.  Demand and supply are the usual
monotone envelopes of the flux used by junction solvers: demand is what an
incoming road can send, supply what an outgoing road can absorb.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

# Absolute slack accepted around [0, rho_max] before densities hard-fail.
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class FundamentalDiagram:
    """Per-road diagram parameters, v_max and rho_max both strictly positive."""

    v_max: float
    rho_max: float

    def __post_init__(self) -> None:
        for name in ("v_max", "rho_max"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ConfigError(f"{name} must be finite and positive, got {value!r}")

    @property
    def rho_crit(self) -> float:
        """Density of maximal flux."""
        return self.rho_max / 2.0

    @property
    def capacity(self) -> float:
        """Maximal flux, attained at rho_crit."""
        return self.v_max * self.rho_max / 4.0

    def _check(self, rho):
        rho = np.asarray(rho, dtype=float)
        if not np.all(np.isfinite(rho)):
            raise DomainError("density must be finite")
        if np.any(rho < -BOUND_SLACK) or np.any(rho > self.rho_max + BOUND_SLACK):
            bad = rho[(rho < -BOUND_SLACK) | (rho > self.rho_max + BOUND_SLACK)]
            raise DomainError(
                f"density {bad.flat[0]!r} outside [0, {self.rho_max}] beyond slack {BOUND_SLACK}"
            )
        return rho

    def velocity(self, rho):
        """v_max (1 - rho/rho_max)."""
        rho = self._check(rho)
        out = self.v_max * (1.0 - rho / self.rho_max)
        return float(out) if out.ndim == 0 else out

    def flux(self, rho):
        """rho * velocity(rho)."""
        rho = self._check(rho)
        out = rho * (self.v_max * (1.0 - rho / self.rho_max))
        return float(out) if out.ndim == 0 else out

    def flux_derivative(self, rho):
        """v_max (1 - 2 rho/rho_max)."""
        rho = self._check(rho)
        out = self.v_max * (1.0 - 2.0 * rho / self.rho_max)
        return float(out) if out.ndim == 0 else out

    def demand(self, rho):
        """Sending capacity: flux below rho_crit, capacity above."""
        rho = self._check(rho)
        out = np.where(rho <= self.rho_crit, rho * (self.v_max * (1.0 - rho / self.rho_max)), self.capacity)
        return float(out) if out.ndim == 0 else out

    def supply(self, rho):
        """Receiving capacity: capacity below rho_crit, flux above."""
        rho = self._check(rho)
        out = np.where(rho <= self.rho_crit, self.capacity, rho * (self.v_max * (1.0 - rho / self.rho_max)))
        return float(out) if out.ndim == 0 else out
