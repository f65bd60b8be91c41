"""Nodal Riemann solvers for a 2-to-1 merge.

Roads 1 and 2 run into the node, road 3 leaves it.  Both solvers map the
trace data (cell values adjacent to the node) to coupling data imposed at the
node faces, and both conserve mass: the two incoming coupling fluxes add up
to the outgoing one.

``solve_relaxation_rs`` descends from a relaxation approximation of the
network.  Coupling and trace states are connected along the linear
characteristics of the relaxation system,

    rho_R^k = rho_0^k - sigma_k,   v_R^k = v_0^k + lam*sigma_k   (incoming)
    rho_L^3 = rho_0^3 + sigma_3,   v_L^3 = v_0^3 + lam*sigma_3   (outgoing)

and the wave strengths sigma_k are fixed by three conditions: the v-fluxes
satisfy the node balance, the equilibrium fluxes at the coupling densities
satisfy the node balance, and the incoming strengths split in proportion to
the influx ratios r_i = v_0^i / (v_0^1 + v_0^2).  Eliminating sigma_1 and
sigma_2 leaves one scalar unknown sigma = sigma_3 governed by a quadratic
equation A*sigma^2 + B*sigma + C = 0 (the flux parabolas make the defect
polynomial of degree two, see ``quadratic_setup``).  When two real roots
exist the solver keeps the one closer to the trace data, measured by the
squared strength norm J(sigma); a negative discriminant falls back to the
vertex of the parabola, the nearest-to-balance point, and the degenerate
linear/constant cases are handled explicitly.  Every branch is reported in
the result so that downstream diagnostics can count fallbacks.

``solve_classical_rs`` is the flow-maximizing demand/supply merge solver:
outgoing flux min(D1 + D2, S3), split between the incoming roads by the
influx ratios of the trace fluxes and clipped to the individual demands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ConfigError, DomainError
from .fundamentals import FundamentalDiagram

# Below this total influx the ratio is considered undefined.
RATIO_FLOOR = 1e-14


class WaveStrengths(NamedTuple):
    sigma1: float
    sigma2: float
    sigma3: float


@dataclass(frozen=True)
class JunctionTrace:
    """Trace data at the node: densities and flux variables per road.

    Index order is (incoming 1, incoming 2, outgoing 3).  The flux variables
    are the relaxation v-states; the scheme feeds equilibrium values
    flux(rho), but that is not required here.
    """

    rho: tuple[float, float, float]
    v: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.rho) != 3 or len(self.v) != 3:
            raise ConfigError("trace needs exactly three roads")
        if not all(math.isfinite(x) for x in (*self.rho, *self.v)):
            raise DomainError("trace data must be finite")


@dataclass(frozen=True)
class QuadraticSetup:
    """Coefficients of the scalar junction equation and their ingredients.

    g0 is the equilibrium flux defect f1(rho1) + f2(rho2) - f3(rho3) of the
    trace, g1 the same defect of the flux variables, h = g1/lam.  a, b, c are
    the coefficients of a*sigma^2 + b*sigma + c = 0.
    """

    g0: float
    g1: float
    h: float
    r1: float
    r2: float
    a: float
    b: float
    c: float
    discriminant: float
    degenerate_ratio: bool


@dataclass(frozen=True)
class Lemma1Report:
    """Solvability diagnostic for the junction quadratic.

    lemc1 holds iff c >= 0, lemc2 iff a <= 0.  If both hold (case1) or both
    fail weakly (case2: c <= 0 and a >= 0) the discriminant b^2 - 4ac is
    nonnegative, so a real root exists.  Purely informational: the check
    never alters solver output.
    """

    lemc1: bool
    lemc2: bool
    case1: bool
    case2: bool
    applies: bool
    discriminant: float


@dataclass(frozen=True)
class CouplingResult:
    """Output of a nodal solver.

    rho_c are coupling densities (rho_R^1, rho_R^2, rho_L^3); the classical
    solver has no density construction and passes the trace through.  f_c are
    the coupling fluxes used as numerical fluxes at the node faces.
    kirchhoff_residual is |f1(rho_c1) + f2(rho_c2) - f3(rho_c3)|, the defect
    of the equilibrium-flux balance at the coupling densities (nonzero only
    when the relaxation solver had to fall back).
    """

    rho_c: tuple[float, float, float]
    f_c: tuple[float, float, float]
    branch: str
    sigma: float | None
    strengths: WaveStrengths | None
    discriminant: float | None
    kirchhoff_residual: float
    degenerate_ratio: bool


def influx_ratios(v1: float, v2: float) -> tuple[float, float, bool]:
    """Fractions of total node inflow carried by each incoming road.

    Negative flux variables are clamped to zero before forming the ratio.
    When the clamped total is below RATIO_FLOOR the ratio is undefined and
    the even split (1/2, 1/2) is returned with the degenerate flag set.  The
    second ratio is the exact complement of the first, so r1 + r2 == 1.
    """
    if not (math.isfinite(v1) and math.isfinite(v2)):
        raise DomainError("influx variables must be finite")
    p1 = max(v1, 0.0)
    p2 = max(v2, 0.0)
    total = p1 + p2
    if total <= RATIO_FLOOR:
        return 0.5, 0.5, True
    r1 = p1 / total
    return r1, 1.0 - r1, False


def _diagram_triple(diagrams) -> tuple[FundamentalDiagram, ...]:
    diagrams = tuple(diagrams)
    if len(diagrams) != 3:
        raise ConfigError("a merge junction needs exactly three diagrams")
    return diagrams


def quadratic_setup(
    trace: JunctionTrace,
    diagrams,
    lam: float,
) -> QuadraticSetup:
    """Assemble the scalar quadratic governing the relaxation coupling.

    With p_k = f_k'(rho_0^k), c_k = v_max^k / rho_max^k and the shorthand
    S_c = r1^2 c_1 + r2^2 c_2, S_p = r1 p_1 + r2 p_2:

        a = c_3 - S_c
        b = 2 h S_c - S_p - p_3
        c = g0 + h S_p - h^2 S_c

    which is the expansion of g0 + d1(r1 (sigma-h)) + d2(r2 (sigma-h))
    - d3(sigma) = 0, where d_k(s) is the flux change along road k's coupling
    characteristic.
    """
    d1, d2, d3 = _diagram_triple(diagrams)
    if not math.isfinite(lam) or lam <= 0.0:
        raise ConfigError(f"relaxation speed must be positive, got {lam!r}")
    rho = trace.rho
    v = trace.v
    f1 = d1.flux(rho[0])
    f2 = d2.flux(rho[1])
    f3 = d3.flux(rho[2])
    g0 = f1 + f2 - f3
    g1 = v[0] + v[1] - v[2]
    h = g1 / lam
    r1, r2, degenerate = influx_ratios(v[0], v[1])
    c1 = d1.v_max / d1.rho_max
    c2 = d2.v_max / d2.rho_max
    c3 = d3.v_max / d3.rho_max
    p1 = d1.flux_derivative(rho[0])
    p2 = d2.flux_derivative(rho[1])
    p3 = d3.flux_derivative(rho[2])
    s_c = r1 * r1 * c1 + r2 * r2 * c2
    s_p = r1 * p1 + r2 * p2
    a = c3 - s_c
    b = 2.0 * h * s_c - s_p - p3
    c = g0 + h * s_p - h * h * s_c
    return QuadraticSetup(
        g0=g0, g1=g1, h=h, r1=r1, r2=r2,
        a=a, b=b, c=c, discriminant=b * b - 4.0 * a * c,
        degenerate_ratio=degenerate,
    )


def lemma1_check(setup: QuadraticSetup) -> Lemma1Report:
    """Evaluate the sufficient solvability conditions on an assembled setup."""
    lemc1 = setup.c >= 0.0
    lemc2 = setup.a <= 0.0
    case1 = lemc1 and lemc2
    case2 = setup.c <= 0.0 and setup.a >= 0.0
    return Lemma1Report(
        lemc1=lemc1, lemc2=lemc2, case1=case1, case2=case2,
        applies=case1 or case2, discriminant=setup.discriminant,
    )


def _raw_flux(d: FundamentalDiagram, rho: float) -> float:
    # Coupling densities may leave [0, rho_max]; diagnostics evaluate the
    # parabola without the domain guard.
    return rho * (d.v_max * (1.0 - rho / d.rho_max))


def _strength_norm(setup: QuadraticSetup, sigma: float) -> float:
    # J(sigma) = sigma1^2 + sigma2^2 + sigma3^2 under the ratio split.
    w = sigma - setup.h
    return (setup.r1 * setup.r1 + setup.r2 * setup.r2) * w * w + sigma * sigma


def solve_relaxation_rs(
    trace: JunctionTrace,
    diagrams,
    lam: float,
) -> CouplingResult:
    """Relaxation-based nodal solver.

    Branches:
      * ``quadratic``: real roots exist; keep the one of minimal strength
        norm J, ties broken toward smaller |sigma|.
      * ``fallback-linear``: a == 0, b != 0; the equation is linear.
      * ``fallback-vertex``: negative discriminant; no real root, take the
        vertex -b/(2a), the minimizer of the squared defect.
      * ``degenerate``: a == b == 0; no sigma dependence is left, take
        sigma = h, which passes the incoming trace through unchanged.
    """
    d1, d2, d3 = _diagram_triple(diagrams)
    setup = quadratic_setup(trace, diagrams, lam)
    a, b, c = setup.a, setup.b, setup.c
    if a == 0.0 and b == 0.0:
        sigma = setup.h
        branch = "degenerate"
    elif a == 0.0:
        sigma = -c / b
        branch = "fallback-linear"
    elif setup.discriminant < 0.0:
        sigma = -b / (2.0 * a)
        branch = "fallback-vertex"
    else:
        # Numerically stable root pair; the c/q form returns an exact zero
        # root whenever c == 0 (balanced trace).
        q = -0.5 * (b + math.copysign(math.sqrt(setup.discriminant), b))
        if q == 0.0:
            roots = (0.0, 0.0)
        else:
            roots = (q / a, c / q)
        j0, j1 = (_strength_norm(setup, s) for s in roots)
        if j0 < j1 or (j0 == j1 and abs(roots[0]) <= abs(roots[1])):
            sigma = roots[0]
        else:
            sigma = roots[1]
        branch = "quadratic"

    w = sigma - setup.h
    s1 = setup.r1 * w
    s2 = w - s1  # complement keeps sigma1 + sigma2 within one ulp of sigma - h
    strengths = WaveStrengths(s1, s2, sigma)
    rho = trace.rho
    v = trace.v
    rho_c = (rho[0] - s1, rho[1] - s2, rho[2] + sigma)
    f_c = (v[0] + lam * s1, v[1] + lam * s2, v[2] + lam * sigma)
    residual = abs(_raw_flux(d1, rho_c[0]) + _raw_flux(d2, rho_c[1]) - _raw_flux(d3, rho_c[2]))
    return CouplingResult(
        rho_c=rho_c, f_c=f_c, branch=branch, sigma=sigma,
        strengths=strengths, discriminant=setup.discriminant,
        kirchhoff_residual=residual, degenerate_ratio=setup.degenerate_ratio,
    )


def solve_classical_rs(rho, diagrams) -> CouplingResult:
    """Flow-maximizing demand/supply solver for the merge.

    Free flow (D1 + D2 <= S3) passes both demands through.  Under congestion
    the outgoing road takes its full supply, split between the incoming roads
    by the influx ratios of their trace fluxes; a share exceeding a road's
    demand is clipped to it, the other road takes the rest (at most one side
    can be clipped, because the clipped partner's remainder S3 - D_i is then
    below the other demand).
    """
    d1, d2, d3 = _diagram_triple(diagrams)
    rho = tuple(float(x) for x in rho)
    if len(rho) != 3:
        raise ConfigError("a merge junction needs exactly three densities")
    dem1 = d1.demand(rho[0])
    dem2 = d2.demand(rho[1])
    sup3 = d3.supply(rho[2])
    degenerate = False
    if dem1 + dem2 <= sup3:
        f1, f2 = dem1, dem2
        f3 = dem1 + dem2
        branch = "free-flow"
    else:
        f3 = sup3
        r1, r2, degenerate = influx_ratios(d1.flux(rho[0]), d2.flux(rho[1]))
        if degenerate:
            # Zero trace fluxes but positive demand: split by demand instead.
            r1 = dem1 / (dem1 + dem2)
        f1 = r1 * sup3
        f2 = sup3 - f1
        branch = "congestion"
        if f1 > dem1:
            f1 = dem1
            f2 = sup3 - dem1
            branch = "clipped-1"
        elif f2 > dem2:
            f2 = dem2
            f1 = sup3 - dem2
            branch = "clipped-2"
    return CouplingResult(
        rho_c=rho, f_c=(f1, f2, f3), branch=branch, sigma=None,
        strengths=None, discriminant=None,
        kirchhoff_residual=abs(f1 + f2 - f3),
        degenerate_ratio=degenerate,
    )
