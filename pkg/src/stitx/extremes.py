"""Observation windows, inradius records, exceedance counts, order statistics.

A window of mass rho at time t is the axis square of area pi rho / t^2
centered at the origin; with the threshold chosen as (log rho - log tau)/(2t)
the expected number of records exceeding it equals tau.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .geometry import ConvexPolygon, _edge_constraints, axis_square
from .stit import Tessellation


@dataclass(slots=True)
class ObservationWindow:
    rho: float
    t: float
    square: ConvexPolygon

    @property
    def side(self) -> float:
        return math.sqrt(math.pi * self.rho) / self.t


def build_window(rho: float, t: float) -> ObservationWindow:
    """Axis square centered at the origin with side sqrt(pi rho)/t."""
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    side = math.sqrt(math.pi * rho) / t
    return ObservationWindow(rho, t, axis_square(side))


def threshold_v(rho: float, tau: float, t: float) -> float:
    """Exceedance threshold (log rho - log tau) / (2t).

    Calibrated so rho * exp(-2 t v) = tau; negative when tau > rho, which
    callers must decide how to treat.
    """
    if rho <= 0.0 or tau <= 0.0 or t <= 0.0:
        raise ValueError(f"rho, tau, t must be positive, got {(rho, tau, t)}")
    return (math.log(rho) - math.log(tau)) / (2.0 * t)


@dataclass(slots=True)
class InradiusRecord:
    x: float
    y: float
    inradius: float
    contaminated: bool


@dataclass(slots=True)
class InradiusRecordSet:
    """Inradius records of all cells with incenter in the window square.

    `contaminated` marks records whose cell touches the simulation boundary
    (their geometry may be a clipped fragment of the true cell); `margin` is
    the slack between the observation square and the simulation window.
    """

    records: list[InradiusRecord]
    window: ObservationWindow
    margin: float

    def filtered(self) -> "InradiusRecordSet":
        """Copy without contaminated records."""
        keep = [r for r in self.records if not r.contaminated]
        return InradiusRecordSet(keep, self.window, self.margin)

    def inradii(self) -> list[float]:
        return [r.inradius for r in self.records]

    @property
    def contamination_count(self) -> int:
        return sum(1 for r in self.records if r.contaminated)


def _available_margin(square: ConvexPolygon, sim_window: ConvexPolygon) -> float:
    """Largest m with square ⊕ [-m, m]^2 still inside sim_window."""
    m = math.inf
    for nx, ny, d in _edge_constraints(sim_window):
        denom = abs(nx) + abs(ny)
        for x, y in square.vertices:
            slack = (nx * x + ny * y - d) / denom
            if slack < m:
                m = slack
    return m


def collect_records(tess: Tessellation, window: ObservationWindow) -> InradiusRecordSet:
    """One record per cell whose incenter lies in the (closed) window square."""
    margin = _available_margin(window.square, tess.sim_window)
    if margin < 0.0:
        raise ValueError(
            "observation window is not covered by the simulation window "
            f"(margin {margin:.3g} < 0)"
        )
    half = 0.5 * window.side
    tol = 1e-9 * max(1.0, half)
    lim = half + tol
    records = [
        InradiusRecord(c.incenter[0], c.incenter[1], c.inradius, c.touches_sim_boundary)
        for c in tess.cells
        if -lim <= c.incenter[0] <= lim and -lim <= c.incenter[1] <= lim
    ]
    return InradiusRecordSet(records, window, margin)


def exceedance_count(records: InradiusRecordSet, v: float) -> int:
    """Number of records with inradius strictly above v."""
    return sum(1 for r in records.records if r.inradius > v)


def order_statistic(records: InradiusRecordSet, k: int) -> float:
    """k-th largest inradius among the records; 0.0 when there are fewer than k."""
    if k < 1:
        raise ValueError(f"order statistic index must be >= 1, got {k}")
    radii = sorted((r.inradius for r in records.records), reverse=True)
    if len(radii) < k:
        return 0.0
    return radii[k - 1]


def write_records_csv(path, record_sets) -> None:
    """Write record sets (one per replication) as rep,x,y,inradius,contaminated."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rep", "x", "y", "inradius", "contaminated"])
        for rep, rs in enumerate(record_sets):
            for r in rs.records:
                writer.writerow(
                    [rep, f"{r.x:.12g}", f"{r.y:.12g}", f"{r.inradius:.12g}",
                     int(r.contaminated)]
                )
