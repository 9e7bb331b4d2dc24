"""Closed-form laws of the division tessellation and Poisson-approximation
helpers: inradius survival, cell intensity, avoidance probabilities for two
disks, total-variation distance, and the neighborhood-sum bound.
"""

from __future__ import annotations

import math

import numpy as np

from .linemeasure import lambda_conv_two_disks, lambda_separating_disks

# coefficient of the exponential envelope dominating the two-disk avoidance
# probability, exp(-2(1 + 2/pi) r) scale
AVOIDANCE_ENVELOPE_COEFF = 2.0 / (2.0 - 4.0 / math.pi)

# expm1(delta)/delta switches to its Taylor form below this, avoiding the
# 0/0 cancellation when the two hitting masses match the hull mass
_BRIDGE_EPS = 1e-8

PMF_TAIL_TOL = 1e-12


def typical_inradius_survival(t: float, v: float) -> float:
    """P(inradius of the typical cell > v) = exp(-2 t v)."""
    if t <= 0.0:
        raise ValueError(f"time parameter must be positive, got {t}")
    if v < 0.0:
        raise ValueError(f"threshold must be nonnegative, got {v}")
    return math.exp(-2.0 * t * v)


def cell_intensity(t: float) -> float:
    """Mean number of cells per unit area at time t: t^2/pi."""
    if t <= 0.0:
        raise ValueError(f"time parameter must be positive, got {t}")
    return t * t / math.pi


def poisson_pmf(tau: float, r: int) -> float:
    """exp(-tau) tau^r / r!, evaluated in log space for large r."""
    if tau <= 0.0:
        raise ValueError(f"mean must be positive, got {tau}")
    if r < 0:
        raise ValueError(f"count must be nonnegative, got {r}")
    return math.exp(-tau + r * math.log(tau) - math.lgamma(r + 1))


def poisson_pmf_vector(tau: float, tail_tol: float = PMF_TAIL_TOL) -> np.ndarray:
    """Poisson pmf truncated adaptively so the dropped tail mass is < tail_tol."""
    if tau <= 0.0:
        raise ValueError(f"mean must be positive, got {tau}")
    probs = [math.exp(-tau)]
    total = probs[0]
    r = 0
    while total < 1.0 - tail_tol:
        r += 1
        probs.append(probs[-1] * tau / r)
        total += probs[-1]
    return np.array(probs)


def gumbel_limit(u: float) -> float:
    """Double-exponential limit law exp(-exp(-u)) of the rescaled maximum."""
    return math.exp(-math.exp(-u))


def two_disk_avoidance(r: float, d: float) -> float:
    """Probability that the unit-time skeleton misses both of two radius-r
    disks at center distance d >= 2r.

    Writing L_hull for the hitting mass of the convex hull, L_sep for the
    separating mass and delta = 4r - L_hull, the probability is

        exp(-L_hull) + L_sep * exp(-4r) * expm1(delta)/delta,

    which smoothly interpolates the two closed-form branches (the ratio form
    for delta != 0 and its limit at d = pi r).
    """
    if r <= 0.0:
        raise ValueError(f"disk radius must be positive, got {r}")
    if d < 2.0 * r:
        raise ValueError(f"need center distance >= 2r, got d={d}, r={r}")
    lam_hull = lambda_conv_two_disks(r, d)
    lam_sep = lambda_separating_disks(r, d)
    delta = 4.0 * r - lam_hull  # = 2r - 2d/pi
    if abs(delta) < _BRIDGE_EPS:
        bridge = 1.0 + delta / 2.0 + delta * delta / 6.0
    else:
        bridge = math.expm1(delta) / delta
    return math.exp(-lam_hull) + lam_sep * math.exp(-4.0 * r) * bridge


def two_disk_avoidance_envelope(r: float) -> float:
    """d-independent upper bound for two_disk_avoidance at radius r."""
    if r <= 0.0:
        raise ValueError(f"disk radius must be positive, got {r}")
    return AVOIDANCE_ENVELOPE_COEFF * math.exp(-2.0 * (1.0 + 2.0 / math.pi) * r)


def tv_distance(p, q) -> float:
    """Total variation distance sum_r |p_r - q_r| between finite pmfs on the
    nonnegative integers (the factor-2 sup-over-subsets convention).

    Shorter vectors are zero-padded; any mass beyond the stored support is
    counted by the caller (see the truncation note in poisson_pmf_vector).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    for name, vec in (("p", p), ("q", q)):
        if vec.ndim != 1:
            raise ValueError(f"{name} must be one-dimensional")
        if np.any(vec < 0.0):
            raise ValueError(f"{name} has negative entries")
        if vec.sum() > 1.0 + 1e-9:
            raise ValueError(f"{name} sums to {vec.sum()} > 1")
    n = max(len(p), len(q))
    p = np.pad(p, (0, n - len(p)))
    q = np.pad(q, (0, n - len(q)))
    return float(np.abs(p - q).sum())


def agg_bound(b1: float, b2: float, b3: float, lam: float) -> float:
    """Poisson-approximation TV bound from the three neighborhood sums:
    2 ((b1 + b2) (1 - exp(-lam))/lam + b3 min(1, 1.4 lam^-1/2)).
    """
    for name, val in (("b1", b1), ("b2", b2), ("b3", b3)):
        if val < 0.0:
            raise ValueError(f"{name} must be nonnegative, got {val}")
    if lam <= 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    return 2.0 * (
        (b1 + b2) * (-math.expm1(-lam)) / lam + b3 * min(1.0, 1.4 / math.sqrt(lam))
    )
