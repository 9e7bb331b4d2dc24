import math

import numpy as np
import pytest

from stitx.geometry import (
    ConvexPolygon,
    GeometryError,
    Line,
    axis_square,
    clip_halfplane,
    contains,
    incircle,
    line_through,
    perimeter,
    projection_interval,
    split_polygon,
)

from conftest import grid_incircle, random_convex_polygon, regular_polygon

VERTICAL_AT = lambda x: Line(0.0, x)  # noqa: E731  line {p : p_x = x}


# ---------------------------------------------------------------- clipping

def test_clip_square_through_middle(unit_square):
    left = clip_halfplane(unit_square, VERTICAL_AT(0.5), "negative")
    assert left is not None
    assert left.area == pytest.approx(0.5, abs=1e-12)
    assert max(x for x, _ in left.vertices) == pytest.approx(0.5)


def test_clip_nonintersecting_line_keeps_polygon(unit_square):
    same = clip_halfplane(unit_square, VERTICAL_AT(5.0), "negative")
    assert same == unit_square


def test_clip_fully_outside_is_empty(unit_square):
    assert clip_halfplane(unit_square, VERTICAL_AT(5.0), "positive") is None


def test_clip_side_validation(unit_square):
    with pytest.raises(ValueError):
        clip_halfplane(unit_square, VERTICAL_AT(0.5), "above")


def test_clip_output_is_ccw(unit_square):
    part = clip_halfplane(unit_square, line_through((0.2, 0.0), (0.8, 1.0)), "negative")
    assert part.area > 0  # shoelace sign: CCW iff positive


def test_clip_partition_of_area():
    """Both sides of any hitting line tile the parent exactly."""
    rng = np.random.default_rng(11)
    for _ in range(200):
        poly = random_convex_polygon(rng)
        phi = rng.uniform(0.0, math.pi)
        lo, hi = projection_interval(poly, phi)
        line = Line(phi, rng.uniform(lo, hi))
        neg, pos, chord = split_polygon(poly, line)
        if neg is None or pos is None:
            continue  # grazing line, one side below the area tolerance
        assert neg.area + pos.area == pytest.approx(poly.area, rel=1e-9)
        assert chord is not None
        for q in chord:
            assert contains(poly, q, tol=1e-9 * poly.char_length)


# ---------------------------------------------------------------- perimeter

@pytest.mark.parametrize(
    "poly,expected",
    [
        (ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)]), 4.0),
        (ConvexPolygon([(0, 0), (3, 0), (0, 4)]), 12.0),
    ],
)
def test_perimeter_exact(poly, expected):
    assert perimeter(poly) == pytest.approx(expected, rel=1e-12)


def test_perimeter_hexagon():
    assert perimeter(regular_polygon(6)) == pytest.approx(6.0, rel=1e-12)


# ---------------------------------------------------------------- incircle

def test_incircle_unit_square(unit_square):
    (cx, cy), r = incircle(unit_square)
    assert (cx, cy) == pytest.approx((0.5, 0.5), abs=1e-12)
    assert r == pytest.approx(0.5, abs=1e-12)


def test_incircle_right_triangle():
    (cx, cy), r = incircle(ConvexPolygon([(0, 0), (3, 0), (0, 4)]))
    assert r == pytest.approx(1.0, abs=1e-12)  # (3 + 4 - 5)/2
    assert (cx, cy) == pytest.approx((1.0, 1.0), abs=1e-12)


def test_incircle_invalid_polygon_rejected():
    with pytest.raises(GeometryError):
        ConvexPolygon([(0, 0), (1, 0)])


def test_incircle_matches_grid_oracle():
    rng = np.random.default_rng(5)
    for _ in range(50):
        poly = random_convex_polygon(rng)
        diam = poly.char_length
        (cx, cy), r = incircle(poly)
        (gx, gy), gr = grid_incircle(poly)
        assert math.hypot(cx - gx, cy - gy) < 1e-3 * diam
        assert abs(r - gr) < 1e-4 * diam


def test_incircle_feasible_and_tight():
    rng = np.random.default_rng(6)
    for _ in range(50):
        poly = random_convex_polygon(rng)
        (cx, cy), r = incircle(poly)
        dists = []
        vs = poly.vertices
        for i in range(len(vs)):
            ax, ay = vs[i]
            bx, by = vs[(i + 1) % len(vs)]
            ex, ey = bx - ax, by - ay
            ln = math.hypot(ex, ey)
            dists.append(((-ey) * (cx - ax) + ex * (cy - ay)) / ln)
        assert min(dists) >= r - 1e-9  # the disk fits
        assert min(dists) < r + 1e-3  # enlarging by 1e-3 breaks a constraint


# ------------------------------------------------------------- projections

def test_projection_unit_square(unit_square):
    assert projection_interval(unit_square, 0.0) == pytest.approx((0.0, 1.0))
    lo, hi = projection_interval(unit_square, math.pi / 4)
    assert (lo, hi) == pytest.approx((0.0, math.sqrt(2)), abs=1e-12)


def test_projection_64gon_close_to_disk():
    poly = regular_polygon(64)
    sagitta = 1.0 - math.cos(math.pi / 64)  # max deviation from the disk: ~1.2e-3
    for phi in np.linspace(0.0, math.pi, 17):
        lo, hi = projection_interval(poly, phi)
        assert -1.0 - 1e-12 <= lo <= -1.0 + sagitta + 1e-12
        assert 1.0 - sagitta - 1e-12 <= hi <= 1.0 + 1e-12


def test_projection_width_equals_pairwise_spread():
    rng = np.random.default_rng(7)
    for _ in range(50):
        poly = random_convex_polygon(rng)
        phi = rng.uniform(0.0, math.pi)
        lo, hi = projection_interval(poly, phi)
        c, s = math.cos(phi), math.sin(phi)
        dots = [x * c + y * s for x, y in poly.vertices]
        spread = max(abs(a - b) for a in dots for b in dots)
        assert hi - lo == pytest.approx(spread, rel=0, abs=1e-14)


# -------------------------------------------------------------- containment

def test_contains(unit_square):
    assert contains(unit_square, (0.5, 0.5))
    assert not contains(unit_square, (2.0, 0.0))
    assert contains(unit_square, (1.0, 0.5))  # closed boundary


def test_axis_square_helper():
    sq = axis_square(4.0, center=(1.0, -1.0))
    assert sq.area == pytest.approx(16.0)
    assert contains(sq, (3.0, -3.0))
    assert not contains(sq, (3.1, -3.0))
