"""Event-driven simulation of the iteration-stable division tessellation.

Cells carry independent exponential clocks with rate perimeter/pi; when a
clock fires the cell is cut by a line drawn from the invariant line measure
restricted to the lines hitting it, and the two parts inherit fresh clocks.
The process is realized with a priority queue on division times, which is
equivalent to per-cell clocks by memorylessness.  The tessellation produced
in a window agrees in law with the restriction of the whole-plane process,
so cells that do not touch the window boundary are unbiased samples.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    ConvexPolygon,
    Point,
    REL_EPS,
    _edge_constraints,
    clip_segment,
    clip_to_polygon,
    contains,
    incircle,
    segment_distance,
    split_polygon,
)
from .linemeasure import sample_hitting_line

JSON_FORMAT = "stitx-tessellation/1"
MAX_SPLIT_ATTEMPTS = 100


class SimulationError(RuntimeError):
    """Raised when the division process misbehaves (runaway growth, etc.)."""


@dataclass(slots=True)
class Cell:
    """A final cell: polygon plus its incircle and provenance."""

    polygon: ConvexPolygon
    incenter: Point
    inradius: float
    birth_time: float
    touches_sim_boundary: bool


@dataclass(slots=True)
class MaximalSegment:
    """Chord created when a cell was divided."""

    a: Point
    b: Point
    birth_time: float

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])


@dataclass(slots=True)
class Tessellation:
    """State of the division process at time t_final inside sim_window."""

    t_final: float
    sim_window: ConvexPolygon
    cells: list[Cell]
    segments: list[MaximalSegment]


def _touches(vertices, window_cons, tol) -> bool:
    # cells lie inside the window, so a vertex on the boundary has some
    # edge offset within tol of zero
    for nx, ny, d in window_cons:
        for x, y in vertices:
            if nx * x + ny * y - d <= tol:
                return True
    return False


def simulate(
    window: ConvexPolygon,
    t: float,
    rng: np.random.Generator,
    max_cells: int = 100_000_000,
) -> Tessellation:
    """Run the division process in `window` up to time `t`.

    Deterministic given (window, t, generator state).  Each live cell with
    hitting mass lam = perimeter/pi divides after an Exp(lam) lifetime along
    a line drawn uniformly from the invariant measure restricted to the
    lines hitting it; division stops once every clock passes t.
    """
    if t <= 0.0:
        raise ValueError(f"process time must be positive, got {t}")
    lam0 = window.perimeter / math.pi
    heap: list[tuple[float, int, float, ConvexPolygon]] = []
    seq = 0
    heapq.heappush(heap, (-math.log1p(-rng.random()) / lam0, seq, 0.0, window))
    segments: list[MaximalSegment] = []

    while heap and heap[0][0] <= t:
        division_time, _, _, poly = heapq.heappop(heap)
        daughters, chord = _divide(poly, rng)
        segments.append(MaximalSegment(chord[0], chord[1], division_time))
        for part in daughters:
            lam = part.perimeter / math.pi
            seq += 1
            wait = -math.log1p(-rng.random()) / lam
            heapq.heappush(heap, (division_time + wait, seq, division_time, part))
        if seq > max_cells:
            raise SimulationError(
                f"cell count exceeded {max_cells} before t={t}; "
                "check the window size / time scaling"
            )

    window_cons = _edge_constraints(window)
    tol = REL_EPS * window.char_length
    cells = []
    for _, _, birth, poly in heap:
        center, radius = incircle(poly)
        cells.append(
            Cell(poly, center, radius, birth, _touches(poly.vertices, window_cons, tol))
        )
    return Tessellation(t, window, cells, segments)


def _divide(poly, rng):
    """Cut poly by a sampled hitting line; resample on degenerate splits."""
    for _ in range(MAX_SPLIT_ATTEMPTS):
        line = sample_hitting_line(poly, rng)
        neg, pos, chord = split_polygon(poly, line)
        if neg is not None and pos is not None and chord is not None:
            return (neg, pos), chord
    raise SimulationError(
        f"could not split cell after {MAX_SPLIT_ATTEMPTS} attempts "
        "(nearly degenerate geometry)"
    )


def scale(tess: Tessellation, factor: float) -> Tessellation:
    """Multiply all coordinates (and incircle radii) by factor; times unchanged."""
    if factor <= 0.0:
        raise ValueError(f"scale factor must be positive, got {factor}")
    f = float(factor)

    def spoly(poly):
        return ConvexPolygon(((x * f, y * f) for x, y in poly.vertices), validate=False)

    cells = [
        Cell(
            spoly(c.polygon),
            (c.incenter[0] * f, c.incenter[1] * f),
            c.inradius * f,
            c.birth_time,
            c.touches_sim_boundary,
        )
        for c in tess.cells
    ]
    segments = [
        MaximalSegment(
            (s.a[0] * f, s.a[1] * f), (s.b[0] * f, s.b[1] * f), s.birth_time
        )
        for s in tess.segments
    ]
    return Tessellation(tess.t_final, spoly(tess.sim_window), cells, segments)


def restrict(tess: Tessellation, sub_window: ConvexPolygon) -> Tessellation:
    """Clip the tessellation to a sub-window contained in the current one.

    Cell fragments get freshly computed incircles, and the boundary flag is
    re-evaluated against the sub-window.
    """
    for v in sub_window.vertices:
        if not contains(tess.sim_window, v):
            raise ValueError("sub_window is not contained in the simulation window")
    sub_cons = _edge_constraints(sub_window)
    tol = REL_EPS * sub_window.char_length
    cells = []
    for cell in tess.cells:
        part = clip_to_polygon(cell.polygon, sub_window)
        if part is None:
            continue
        center, radius = incircle(part)
        cells.append(
            Cell(part, center, radius, cell.birth_time,
                 _touches(part.vertices, sub_cons, tol))
        )
    segments = []
    for seg in tess.segments:
        clipped = clip_segment(seg.a, seg.b, sub_window)
        if clipped is None:
            continue
        a, b = clipped
        if math.hypot(b[0] - a[0], b[1] - a[1]) <= tol:
            continue
        segments.append(MaximalSegment(a, b, seg.birth_time))
    return Tessellation(tess.t_final, sub_window, cells, segments)


def to_json(tess: Tessellation) -> str:
    """Serialize to the documented JSON layout (see README)."""
    doc = {
        "format": JSON_FORMAT,
        "t": tess.t_final,
        "window": [list(v) for v in tess.sim_window.vertices],
        "cells": [
            {
                "vertices": [list(v) for v in c.polygon.vertices],
                "incenter": list(c.incenter),
                "inradius": c.inradius,
                "birth_time": c.birth_time,
                "touches_boundary": c.touches_sim_boundary,
            }
            for c in tess.cells
        ],
        "segments": [
            {"a": list(s.a), "b": list(s.b), "birth_time": s.birth_time}
            for s in tess.segments
        ],
    }
    return json.dumps(doc, sort_keys=True)


def from_json(text: str) -> Tessellation:
    doc = json.loads(text)
    if doc.get("format") != JSON_FORMAT:
        raise ValueError(f"unsupported tessellation format: {doc.get('format')!r}")
    window = ConvexPolygon((tuple(v) for v in doc["window"]), validate=False)
    cells = [
        Cell(
            ConvexPolygon((tuple(v) for v in c["vertices"]), validate=False),
            tuple(c["incenter"]),
            float(c["inradius"]),
            float(c["birth_time"]),
            bool(c["touches_boundary"]),
        )
        for c in doc["cells"]
    ]
    segments = [
        MaximalSegment(tuple(s["a"]), tuple(s["b"]), float(s["birth_time"]))
        for s in doc["segments"]
    ]
    return Tessellation(float(doc["t"]), window, cells, segments)


def skeleton_avoids_disks(tess: Tessellation, disks) -> bool:
    """True when no maximal segment meets any of the given (center, radius) disks.

    The window boundary is not part of the skeleton; callers should keep the
    disks well inside the window.
    """
    for (cx, cy), r in disks:
        for seg in tess.segments:
            if segment_distance(seg.a, seg.b, (cx, cy)) <= r:
                return False
    return True
