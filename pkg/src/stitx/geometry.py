"""Planar convex geometry kernel: polygons, halfplane clipping, incircles.

Everything here is pure and deterministic.  Polygons are immutable CCW vertex
lists; lines are (normal angle, signed offset) pairs.  The kernel is written
for small polygons (tessellation cells have a handful of edges), so the
incircle solver enumerates active constraint triples instead of running a
general LP.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple

Point = tuple[float, float]

# Relative tolerance for collinearity/degeneracy tests; multiplied by a
# characteristic length before use.  Double precision leaves ample headroom
# at window scales up to ~1e3.
REL_EPS = 1e-9


class GeometryError(ValueError):
    """Raised for invalid or degenerate geometric input."""


class Line(NamedTuple):
    """Line {x : x·(cos phi, sin phi) = p} with phi in [0, pi), p signed.

    Each geometric line has exactly one such representation, which makes the
    invariant line measure simply (1/pi) dp dphi on [0, pi) x R.
    """

    phi: float
    p: float

    def normal(self) -> Point:
        return (math.cos(self.phi), math.sin(self.phi))

    def offset(self, pt: Point) -> float:
        """Signed distance of pt from the line along the normal."""
        return pt[0] * math.cos(self.phi) + pt[1] * math.sin(self.phi) - self.p


def line_through(a: Point, b: Point) -> Line:
    """The unique Line through two distinct points."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx == 0.0 and dy == 0.0:
        raise GeometryError("coincident points do not define a line")
    phi = math.atan2(dx, -dy)  # normal = rotate(direction, -90deg), then fold
    if phi < 0.0:
        phi += math.pi
    if phi >= math.pi:
        phi -= math.pi
    c, s = math.cos(phi), math.sin(phi)
    return Line(phi, a[0] * c + a[1] * s)


class ConvexPolygon:
    """Immutable strictly convex polygon with CCW vertices.

    Derived quantities (area, perimeter, centroid, circumradius) are cached
    lazily; instances are safe to share across threads.
    """

    __slots__ = ("vertices", "_area", "_perimeter", "_centroid", "_circumradius")

    def __init__(self, vertices: Iterable[Point], *, validate: bool = True):
        vs = tuple((float(x), float(y)) for x, y in vertices)
        if validate:
            vs = _validated(vs)
        self.vertices = vs
        self._area = None
        self._perimeter = None
        self._centroid = None
        self._circumradius = None

    def __repr__(self) -> str:
        return f"ConvexPolygon({list(self.vertices)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    @property
    def area(self) -> float:
        if self._area is None:
            self._area = _shoelace(self.vertices)
        return self._area

    @property
    def perimeter(self) -> float:
        if self._perimeter is None:
            vs = self.vertices
            total = 0.0
            xp, yp = vs[-1]
            for x, y in vs:
                total += math.hypot(x - xp, y - yp)
                xp, yp = x, y
            self._perimeter = total
        return self._perimeter

    @property
    def centroid(self) -> Point:
        if self._centroid is None:
            vs = self.vertices
            a6 = 0.0
            cx = cy = 0.0
            xp, yp = vs[-1]
            for x, y in vs:
                w = xp * y - x * yp
                a6 += w
                cx += (xp + x) * w
                cy += (yp + y) * w
                xp, yp = x, y
            self._centroid = (cx / (3.0 * a6), cy / (3.0 * a6))
        return self._centroid

    @property
    def circumradius(self) -> float:
        """Radius of the disk around the centroid covering the polygon."""
        if self._circumradius is None:
            gx, gy = self.centroid
            self._circumradius = max(
                math.hypot(x - gx, y - gy) for x, y in self.vertices
            )
        return self._circumradius

    @property
    def char_length(self) -> float:
        """Characteristic length used to scale relative tolerances."""
        return 2.0 * self.circumradius


def _shoelace(vs) -> float:
    total = 0.0
    xp, yp = vs[-1]
    for x, y in vs:
        total += xp * y - x * yp
        xp, yp = x, y
    return 0.5 * total


def _validated(vs: tuple[Point, ...]) -> tuple[Point, ...]:
    if len(vs) < 3:
        raise GeometryError(f"polygon needs >= 3 vertices, got {len(vs)}")
    for x, y in vs:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError("non-finite vertex coordinate")
    area2 = 2.0 * _shoelace(vs)
    if area2 < 0.0:
        vs = vs[::-1]
        area2 = -area2
    scale = max(max(abs(x), abs(y)) for x, y in vs)
    scale = max(scale, 1e-300)
    if area2 <= (REL_EPS * scale) ** 2:
        raise GeometryError("polygon has (near-)zero area")
    n = len(vs)
    tol = REL_EPS * scale
    for i in range(n):
        ax, ay = vs[i - 1]
        bx, by = vs[i]
        cx, cy = vs[(i + 1) % n]
        if math.hypot(bx - ax, by - ay) <= tol:
            raise GeometryError("repeated vertex")
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross <= tol * tol:
            raise GeometryError("polygon is not strictly convex")
    return vs


def axis_square(side: float, center: Point = (0.0, 0.0)) -> ConvexPolygon:
    """Axis-aligned square of given side length."""
    h = 0.5 * side
    cx, cy = center
    return ConvexPolygon(
        [(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)],
        validate=False,
    )


def axis_rectangle(xlo: float, xhi: float, ylo: float, yhi: float) -> ConvexPolygon:
    if xhi <= xlo or yhi <= ylo:
        raise GeometryError("empty rectangle")
    return ConvexPolygon(
        [(xlo, ylo), (xhi, ylo), (xhi, yhi), (xlo, yhi)], validate=False
    )


def perimeter(poly: ConvexPolygon) -> float:
    """Sum of edge lengths."""
    return poly.perimeter


def projection_interval(poly: ConvexPolygon, phi: float) -> tuple[float, float]:
    """Offset range [p_min, p_max] of lines with normal angle phi hitting poly.

    The interval width equals the polygon's width in direction phi.
    """
    c, s = math.cos(phi), math.sin(phi)
    dots = [x * c + y * s for x, y in poly.vertices]
    return min(dots), max(dots)


def contains(poly: ConvexPolygon, pt: Point, tol: float | None = None) -> bool:
    """Closed containment test: boundary points count as inside."""
    if tol is None:
        tol = REL_EPS * poly.char_length
    px, py = pt
    vs = poly.vertices
    xp, yp = vs[-1]
    for x, y in vs:
        ex, ey = x - xp, y - yp
        # left-of-edge test, normalized by edge length
        cross = ex * (py - yp) - ey * (px - xp)
        if cross < -tol * math.hypot(ex, ey):
            return False
        xp, yp = x, y
    return True


def split_polygon(
    poly: ConvexPolygon, line: Line
) -> tuple[ConvexPolygon | None, ConvexPolygon | None, tuple[Point, Point] | None]:
    """Split poly along line into (negative side, positive side, chord).

    The two parts share the chord vertices exactly, so their areas add up to
    the parent's area to rounding error.  A side whose area falls below the
    degeneracy tolerance comes back as None, as does the chord when the line
    misses the interior.
    """
    c, s = math.cos(line.phi), math.sin(line.phi)
    p = line.p
    vs = poly.vertices
    offs = [x * c + y * s - p for x, y in vs]

    neg: list[Point] = []
    pos: list[Point] = []
    chord: list[Point] = []
    n = len(vs)
    for i in range(n):
        v = vs[i]
        o = offs[i]
        if o <= 0.0:
            neg.append(v)
        if o >= 0.0:
            pos.append(v)
            if o == 0.0:
                chord.append(v)
        j = (i + 1) % n
        oj = offs[j]
        if (o < 0.0 < oj) or (oj < 0.0 < o):
            t = o / (o - oj)
            w = vs[j]
            q = (v[0] + t * (w[0] - v[0]), v[1] + t * (w[1] - v[1]))
            neg.append(q)
            pos.append(q)
            chord.append(q)

    tol_len = REL_EPS * poly.char_length
    min_area = tol_len * tol_len
    neg_poly = _as_polygon(neg, tol_len, min_area)
    pos_poly = _as_polygon(pos, tol_len, min_area)
    if len(chord) < 2 or neg_poly is None or pos_poly is None:
        return neg_poly, pos_poly, None
    a = chord[0]
    b = max(chord[1:], key=lambda q: (q[0] - a[0]) ** 2 + (q[1] - a[1]) ** 2)
    if math.hypot(b[0] - a[0], b[1] - a[1]) <= tol_len:
        return neg_poly, pos_poly, None
    return neg_poly, pos_poly, (a, b)


def _as_polygon(pts: list[Point], tol_len: float, min_area: float):
    if len(pts) < 3:
        return None
    cleaned: list[Point] = []
    for q in pts:
        if cleaned and math.hypot(q[0] - cleaned[-1][0], q[1] - cleaned[-1][1]) <= tol_len:
            continue
        cleaned.append(q)
    if len(cleaned) >= 2 and math.hypot(
        cleaned[0][0] - cleaned[-1][0], cleaned[0][1] - cleaned[-1][1]
    ) <= tol_len:
        cleaned.pop()
    if len(cleaned) < 3 or _shoelace(cleaned) <= min_area:
        return None
    return ConvexPolygon(cleaned, validate=False)


def clip_halfplane(poly: ConvexPolygon, line: Line, side: str) -> ConvexPolygon | None:
    """Intersection of poly with a closed halfplane of line.

    side "negative" keeps {x : x·normal <= p}, "positive" the other one.
    Returns None when the intersection has (near-)zero area.
    """
    if side not in ("negative", "positive"):
        raise ValueError(f"side must be 'negative' or 'positive', got {side!r}")
    neg, pos, _ = split_polygon(poly, line)
    return neg if side == "negative" else pos


def clip_to_polygon(poly: ConvexPolygon, window: ConvexPolygon) -> ConvexPolygon | None:
    """Intersection poly ∩ window (window convex), or None if empty."""
    part: ConvexPolygon | None = poly
    for line, side in edge_halfplanes(window):
        part = clip_halfplane(part, line, side)
        if part is None:
            return None
    return part


def edge_halfplanes(poly: ConvexPolygon) -> list[tuple[Line, str]]:
    """Lines through each edge, with the side containing the interior."""
    out = []
    vs = poly.vertices
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]
        length = math.hypot(ex, ey)
        # inward unit normal for a CCW polygon
        nx, ny = -ey / length, ex / length
        d = nx * a[0] + ny * a[1]
        theta = math.atan2(ny, nx)
        if theta < 0.0:
            theta += 2.0 * math.pi
        if theta < math.pi:
            out.append((Line(theta, d), "positive"))
        else:
            out.append((Line(theta - math.pi, -d), "negative"))
    return out


def _edge_constraints(poly: ConvexPolygon):
    """(nx, ny, d) per edge with inward unit normal: interior has n·x >= d."""
    vs = poly.vertices
    n = len(vs)
    cons = []
    for i in range(n):
        ax, ay = vs[i]
        bx, by = vs[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        length = math.hypot(ex, ey)
        if length == 0.0:
            raise GeometryError("repeated vertex")
        nx, ny = -ey / length, ex / length
        cons.append((nx, ny, nx * ax + ny * ay))
    return cons


def incircle(poly: ConvexPolygon) -> tuple[Point, float]:
    """Chebyshev center and radius: the largest disk inside the polygon.

    Maximizes r subject to n_e·c - r >= d_e for every edge e.  The optimum is
    a vertex of a 3-variable LP, so we enumerate constraint triples, solve
    each 3x3 system by Cramer's rule and keep the best feasible candidate.
    Cubic in the edge count; intended for the small cells a tessellation
    produces.  Ties are broken by lexicographic triple order, which keeps the
    result deterministic even for polygons with parallel sides.
    """
    cons = _edge_constraints(poly)
    m = len(cons)
    tol = REL_EPS * max(1.0, poly.char_length)
    best_r = -math.inf
    best_c: Point | None = None
    for i in range(m - 2):
        ni = cons[i]
        for j in range(i + 1, m - 1):
            nj = cons[j]
            for k in range(j + 1, m):
                nk = cons[k]
                # rows (nx, ny, -1) | rhs d
                det = (
                    ni[0] * (nj[1] * -1.0 - -1.0 * nk[1])
                    - ni[1] * (nj[0] * -1.0 - -1.0 * nk[0])
                    + -1.0 * (nj[0] * nk[1] - nj[1] * nk[0])
                )
                if abs(det) < 1e-12:
                    continue
                dx = (
                    ni[2] * (nj[1] * -1.0 - -1.0 * nk[1])
                    - ni[1] * (nj[2] * -1.0 - -1.0 * nk[2])
                    + -1.0 * (nj[2] * nk[1] - nj[1] * nk[2])
                )
                dy = (
                    ni[0] * (nj[2] * -1.0 - -1.0 * nk[2])
                    - ni[2] * (nj[0] * -1.0 - -1.0 * nk[0])
                    + -1.0 * (nj[0] * nk[2] - nj[2] * nk[0])
                )
                dr = (
                    ni[0] * (nj[1] * nk[2] - nj[2] * nk[1])
                    - ni[1] * (nj[0] * nk[2] - nj[2] * nk[0])
                    + ni[2] * (nj[0] * nk[1] - nj[1] * nk[0])
                )
                cx = dx / det
                cy = dy / det
                r = dr / det
                if r <= best_r:
                    continue
                feasible = True
                for nx, ny, d in cons:
                    if nx * cx + ny * cy - r < d - tol:
                        feasible = False
                        break
                if feasible:
                    best_r = r
                    best_c = (cx, cy)
    if best_c is None or best_r <= 0.0:
        raise GeometryError("incircle: polygon is degenerate or unbounded")
    return best_c, best_r


def segment_distance(a: Point, b: Point, q: Point) -> float:
    """Euclidean distance from point q to the segment [a, b]."""
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    qx, qy = q[0] - ax, q[1] - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(qx, qy)
    t = (qx * dx + qy * dy) / denom
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(qx - t * dx, qy - t * dy)


def clip_segment(a: Point, b: Point, window: ConvexPolygon) -> tuple[Point, Point] | None:
    """Part of segment [a, b] inside the convex window, None if disjoint."""
    t0, t1 = 0.0, 1.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    for nx, ny, d in _edge_constraints(window):
        num = nx * a[0] + ny * a[1] - d  # >= 0 means a-side is inside
        den = nx * dx + ny * dy
        if den == 0.0:
            if num < 0.0:
                return None
            continue
        t = -num / den
        if den > 0.0:  # entering
            if t > t0:
                t0 = t
        else:  # leaving
            if t < t1:
                t1 = t
        if t0 > t1:
            return None
    pa = (a[0] + t0 * dx, a[1] + t0 * dy)
    pb = (a[0] + t1 * dx, a[1] + t1 * dy)
    return pa, pb
