"""Invariant line measure: hitting masses, separating masses, line sampling.

The measure on lines is (1/pi) dp dphi over the (normal angle, signed offset)
chart, normalized so the unit disk carries hitting mass 2.  For a convex body
the hitting mass is perimeter/pi.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import ConvexPolygon, GeometryError, Line, projection_interval

MAX_SAMPLE_ATTEMPTS = 1_000_000


def lambda_hitting(poly: ConvexPolygon) -> float:
    """Measure of the set of lines hitting the polygon: perimeter/pi."""
    return poly.perimeter / math.pi


def sample_hitting_line(
    poly: ConvexPolygon,
    rng: np.random.Generator,
    max_attempts: int = MAX_SAMPLE_ATTEMPTS,
) -> Line:
    """Draw a line from the normalized invariant measure restricted to [poly].

    Rejection against the disk around the centroid that covers the polygon:
    phi uniform on [0, pi), offset uniform over the disk's offset interval,
    accept when the line meets the polygon.  Acceptance equals
    perimeter/(2 pi R) >= 2/pi for any convex body.
    """
    gx, gy = poly.centroid
    radius = poly.circumradius
    vs = poly.vertices
    for _ in range(max_attempts):
        phi = rng.random() * math.pi
        c, s = math.cos(phi), math.sin(phi)
        p = gx * c + gy * s + (2.0 * rng.random() - 1.0) * radius
        lo = hi = vs[0][0] * c + vs[0][1] * s
        for x, y in vs:
            d = x * c + y * s
            if d < lo:
                lo = d
            elif d > hi:
                hi = d
        if lo <= p <= hi:
            return Line(phi, p)
    raise GeometryError(
        f"line sampling failed after {max_attempts} attempts (degenerate polygon?)"
    )


def _adaptive_simpson(f, a, b, tol):
    """Classic adaptive Simpson quadrature with Richardson acceptance test."""
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    half = 0.5 * tol
    return _simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )


def lambda_separating_disks(r: float, d: float, tol: float = 1e-8) -> float:
    """Measure of lines separating two radius-r disks at center distance d.

    Equals (1/pi) * integral over [0, pi) of max(0, d|cos phi| - 2r) dphi,
    evaluated by adaptive Simpson on the smooth piece below the kink at
    arccos(2r/d).  Always bounded by 2d/pi, the mass of lines crossing the
    segment between the centers.
    """
    if r <= 0.0:
        raise ValueError(f"disk radius must be positive, got {r}")
    if d < 2.0 * r:
        raise ValueError(
            f"overlapping disks (d={d} < 2r={2 * r}) admit no separating line"
        )
    if d == 2.0 * r:
        return 0.0
    phi_star = math.acos(2.0 * r / d)
    integral = _adaptive_simpson(lambda u: d * math.cos(u) - 2.0 * r, 0.0, phi_star, tol)
    return 2.0 * integral / math.pi


def lambda_conv_two_disks(r: float, d: float) -> float:
    """Hitting mass of the convex hull of two radius-r disks d apart: 2r + 2d/pi."""
    if r <= 0.0:
        raise ValueError(f"disk radius must be positive, got {r}")
    if d < 0.0:
        raise ValueError(f"center distance must be nonnegative, got {d}")
    return 2.0 * r + 2.0 * d / math.pi
