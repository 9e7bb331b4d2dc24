import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from stitx.geometry import ConvexPolygon


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0)) -> ConvexPolygon:
    cx, cy = center
    return ConvexPolygon(
        [
            (cx + radius * math.cos(2 * math.pi * k / n),
             cy + radius * math.sin(2 * math.pi * k / n))
            for k in range(n)
        ]
    )


def random_convex_polygon(rng: np.random.Generator, max_points: int = 12,
                          scale: float = 1.0) -> ConvexPolygon:
    """Convex hull of random points in a disk; at least a triangle."""
    while True:
        n = int(rng.integers(4, max_points + 1))
        pts = rng.normal(size=(n, 2))
        pts *= scale * rng.uniform(0.2, 1.0, size=(n, 1))
        try:
            hull = ConvexHull(pts)
            return ConvexPolygon(pts[hull.vertices])
        except Exception:  # qhull/validation reject flat inputs; resample
            continue


def grid_incircle(poly: ConvexPolygon):
    """Brute-force Chebyshev center oracle: maximize the minimum edge
    distance over a grid, refined in stages to a step of roughly 2e-5 of
    the diameter.  Independent of the constraint-triple solver."""
    vs = np.array(poly.vertices)
    nxt = np.roll(vs, -1, axis=0)
    edge = nxt - vs
    lengths = np.hypot(edge[:, 0], edge[:, 1])
    normals = np.stack([-edge[:, 1], edge[:, 0]], axis=1) / lengths[:, None]
    offsets = (normals * vs).sum(axis=1)

    def depth(xs, ys):
        pts = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1)
        return (pts @ normals.T - offsets).min(axis=-1)

    xlo, ylo = vs.min(axis=0)
    xhi, yhi = vs.max(axis=0)
    best = None
    window = ((xlo, xhi), (ylo, yhi))
    for _ in range(3):
        xs = np.linspace(window[0][0], window[0][1], 321)
        ys = np.linspace(window[1][0], window[1][1], 321)
        vals = depth(xs, ys)
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        best = ((xs[i], ys[j]), vals[i, j])
        sx = (xs[1] - xs[0]) * 3
        sy = (ys[1] - ys[0]) * 3
        window = ((xs[i] - sx, xs[i] + sx), (ys[j] - sy, ys[j] + sy))
    return best


@pytest.fixture
def unit_square() -> ConvexPolygon:
    return ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
