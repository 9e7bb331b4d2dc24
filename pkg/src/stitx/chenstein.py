"""Window subdivision and neighborhood bookkeeping for the Poisson
approximation of exceedance counts: per-square exceedance probabilities,
the analytic first neighborhood sum, and a Monte Carlo estimator for joint
exceedances of two sub-squares.  Everything here is at process time 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .extremes import threshold_v
from .geometry import ConvexPolygon, axis_rectangle
from .laws import cell_intensity
from .rng import TAG_PAIR, stream
from .stit import simulate

Index = tuple[int, int]


@dataclass(slots=True)
class SubdivisionSpec:
    """Partition of the observation square into side_count^2 equal sub-squares.

    side_count = floor(sqrt(pi rho / log log rho)), which makes the sub-square
    diagonal fall below the exceedance threshold once rho is large enough.
    beta in (0, 1) sets the neighborhood radius rho^(beta/2) in index space.
    """

    rho: float
    tau: float
    beta: float
    side_count: int
    cell_area: float

    @property
    def window_side(self) -> float:
        return math.sqrt(math.pi * self.rho)

    @property
    def square_side(self) -> float:
        return self.window_side / self.side_count

    @property
    def square_count(self) -> int:
        return self.side_count * self.side_count

    @property
    def threshold(self) -> float:
        return threshold_v(self.rho, self.tau, 1.0)

    @property
    def diagonal(self) -> float:
        return math.sqrt(2.0) * self.square_side

    @property
    def neighborhood_radius(self) -> float:
        return self.rho ** (self.beta / 2.0)


def build_subdivision(rho: float, tau: float, beta: float = 0.5) -> SubdivisionSpec:
    if rho <= math.e:
        raise ValueError(f"rho must exceed e for the subdivision rule, got {rho}")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    side_count = math.floor(math.sqrt(math.pi * rho / math.log(math.log(rho))))
    cell_area = math.pi * rho / side_count**2
    return SubdivisionSpec(rho, tau, beta, side_count, cell_area)


def rho0_satisfied(spec: SubdivisionSpec) -> bool:
    """True when the sub-square diagonal is strictly below the threshold.

    In that regime a sub-square can host at most one incircle center with
    radius above the threshold, so per-square exceedance indicators add up
    to the window's exceedance count.
    """
    return spec.threshold > spec.diagonal


def _check_index(spec: SubdivisionSpec, i: Index) -> None:
    if not (1 <= i[0] <= spec.side_count and 1 <= i[1] <= spec.side_count):
        raise ValueError(f"index {i} outside grid [1, {spec.side_count}]^2")


def neighborhood(spec: SubdivisionSpec, i: Index, r: float) -> set[Index]:
    """Grid indices within Chebyshev distance r of i (including i)."""
    _check_index(spec, i)
    reach = math.floor(r) if r >= 0.0 else -1
    i1, i2 = i
    out = set()
    for a in range(max(1, i1 - reach), min(spec.side_count, i1 + reach) + 1):
        for b in range(max(1, i2 - reach), min(spec.side_count, i2 + reach) + 1):
            out.add((a, b))
    return out


def neighborhood_size(spec: SubdivisionSpec, i: Index, r: float) -> int:
    """|neighborhood| without materializing it."""
    _check_index(spec, i)
    reach = math.floor(r) if r >= 0.0 else -1
    i1, i2 = i
    rows = min(spec.side_count, i1 + reach) - max(1, i1 - reach) + 1
    cols = min(spec.side_count, i2 + reach) - max(1, i2 - reach) + 1
    return max(rows, 0) * max(cols, 0)


def subsquare_bounds(spec: SubdivisionSpec, i: Index) -> tuple[float, float, float, float]:
    """(xlo, xhi, ylo, yhi) of sub-square i; matrix indexing, row 1 on top."""
    _check_index(spec, i)
    i1, i2 = i
    s = spec.square_side
    half = 0.5 * spec.window_side
    xlo = -half + (i2 - 1) * s
    yhi = half - (i1 - 1) * s
    return xlo, xlo + s, yhi - s, yhi


def subsquare(spec: SubdivisionSpec, i: Index) -> ConvexPolygon:
    xlo, xhi, ylo, yhi = subsquare_bounds(spec, i)
    return axis_rectangle(xlo, xhi, ylo, yhi)


def square_index(spec: SubdivisionSpec, pt) -> Index | None:
    """Index of the sub-square containing pt, None outside the window."""
    half = 0.5 * spec.window_side
    s = spec.square_side
    x, y = pt
    if not (-half <= x <= half and -half <= y <= half):
        return None
    i2 = min(spec.side_count, max(1, 1 + math.floor((x + half) / s)))
    i1 = min(spec.side_count, max(1, 1 + math.floor((half - y) / s)))
    return (i1, i2)


def p_i_analytic(spec: SubdivisionSpec) -> float:
    """Per-square exceedance probability cell_area * intensity * survival.

    Valid in the at-most-one-exceedance regime; algebraically equal to
    tau / side_count^2, so the probabilities over all squares sum to tau.
    """
    if not rho0_satisfied(spec):
        raise ValueError(
            "per-square exceedance formula needs the sub-square diagonal below "
            f"the threshold (rho={spec.rho}, tau={spec.tau})"
        )
    survival = math.exp(-2.0 * spec.threshold)
    return spec.cell_area * cell_intensity(1.0) * survival


def b1_bound(spec: SubdivisionSpec) -> float:
    """Closed-form bound tau^2/|V| (2 rho^(beta/2) + 1)^2 on the first
    neighborhood sum."""
    return (
        spec.tau**2
        / spec.square_count
        * (2.0 * spec.rho ** (spec.beta / 2.0) + 1.0) ** 2
    )


def b1_direct(spec: SubdivisionSpec) -> float:
    """Exact first neighborhood sum sum_i sum_{j in S(i, r)} p_i p_j."""
    p = p_i_analytic(spec)
    r = spec.neighborhood_radius
    total = 0
    for i1 in range(1, spec.side_count + 1):
        for i2 in range(1, spec.side_count + 1):
            total += neighborhood_size(spec, (i1, i2), r)
    return p * p * total


class PairExceedanceEstimate(NamedTuple):
    estimate: float
    stderr: float
    p_i_hat: float
    p_j_hat: float
    replications: int


def estimate_pair_exceedance(
    spec: SubdivisionSpec,
    i: Index,
    j: Index,
    replications: int,
    rng_seed: int,
    margin: float | None = None,
) -> PairExceedanceEstimate:
    """Monte Carlo estimate of P(both sub-squares i and j carry an exceedance).

    Simulates the pair's bounding rectangle plus a safety margin; each
    replication runs on its own stream derived from rng_seed, so the result
    is reproducible and order-independent.
    """
    if i == j:
        raise ValueError("pair estimator needs two distinct sub-squares")
    _check_index(spec, i)
    _check_index(spec, j)
    if replications < 100:
        raise ValueError(
            f"need at least 100 replications for a meaningful estimate, got {replications}"
        )
    v = spec.threshold
    if margin is None:
        margin = 4.0 * v + 2.0
    bi = subsquare_bounds(spec, i)
    bj = subsquare_bounds(spec, j)
    window = axis_rectangle(
        min(bi[0], bj[0]) - margin,
        max(bi[1], bj[1]) + margin,
        min(bi[2], bj[2]) - margin,
        max(bi[3], bj[3]) + margin,
    )
    hits_i = hits_j = hits_both = 0
    for rep in range(replications):
        tess = simulate(window, 1.0, stream(rng_seed, TAG_PAIR, rep))
        ex_i = ex_j = False
        for cell in tess.cells:
            if cell.inradius <= v:
                continue
            x, y = cell.incenter
            if not ex_i and bi[0] <= x <= bi[1] and bi[2] <= y <= bi[3]:
                ex_i = True
            if not ex_j and bj[0] <= x <= bj[1] and bj[2] <= y <= bj[3]:
                ex_j = True
            if ex_i and ex_j:
                break
        hits_i += ex_i
        hits_j += ex_j
        hits_both += ex_i and ex_j
    est = hits_both / replications
    stderr = math.sqrt(est * (1.0 - est) / replications)
    return PairExceedanceEstimate(
        est, stderr, hits_i / replications, hits_j / replications, replications
    )
