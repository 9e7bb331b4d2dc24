"""Monte Carlo harness: replication loops, empirical pmfs and TV curves,
order-statistic and maximum-law checks, avoidance-probability validation.

Replications run on disjoint random streams derived from the master seed, so
results are bit-identical for any worker count; aggregation only reorders
arithmetic over the naturally ordered replication list.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sstats

from .extremes import build_window, collect_records, threshold_v
from .geometry import axis_square
from .laws import poisson_pmf, poisson_pmf_vector, tv_distance, two_disk_avoidance, \
    two_disk_avoidance_envelope
from .rng import TAG_BOOTSTRAP, TAG_DISK, stream, replication_stream
from .stit import simulate, skeleton_avoids_disks

BOOTSTRAP_RESAMPLES = 1000
CONTAMINATION_LIMIT = 0.20


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    rho_list: list[float]
    tau: float
    t: float = 1.0
    replications: int = 1000
    master_seed: int = 0
    margin: float | None = None  # None: auto rule 4 * threshold + 2
    beta: float = 0.5
    filter_contaminated: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if self.tau <= 0.0 or self.t <= 0.0:
            raise ValueError("tau and t must be positive")
        for rho in self.rho_list:
            if rho <= self.tau:
                raise ValueError(
                    f"rho={rho} must exceed tau={self.tau} so the threshold is positive"
                )


def default_margin(rho: float, tau: float, t: float) -> float:
    """Simulation margin around the observation square: 4 * threshold + 2.

    Calibrated so that well under 1% of records come from cells touching the
    simulation boundary at desk scales.
    """
    return 4.0 * threshold_v(rho, tau, t) + 2.0


# ---------------------------------------------------------------------------
# replication tasks (top level so process pools can pickle them)

def _records_task(args):
    master_seed, rho_index, rep, rho, t, margin = args
    window = build_window(rho, t)
    sim_window = axis_square(window.side + 2.0 * margin)
    tess = simulate(sim_window, t, replication_stream(master_seed, rho_index, rep))
    rs = collect_records(tess, window)
    return [(r.inradius, r.contaminated) for r in rs.records]


def _avoidance_task(args):
    master_seed, d_index, rep, r, d, t_sim, clearance = args
    side = d + 2.0 * r + 2.0 * clearance
    window = axis_square(side)
    tess = simulate(window, t_sim, stream(master_seed, TAG_DISK, d_index, rep))
    disks = [((-0.5 * d, 0.0), r), ((0.5 * d, 0.0), r)]
    return skeleton_avoids_disks(tess, disks)


def _map_tasks(fn, argslist, workers):
    if workers <= 1:
        return [fn(a) for a in argslist]
    chunk = max(1, len(argslist) // (workers * 16))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, argslist, chunksize=chunk))


def _collect_replications(cfg: ExperimentConfig, rho_index: int, rho: float,
                          margin: float):
    args = [
        (cfg.master_seed, rho_index, rep, rho, cfg.t, margin)
        for rep in range(cfg.replications)
    ]
    return _map_tasks(_records_task, args, cfg.workers)


def _contamination_rate(rep_records) -> float:
    total = sum(len(rr) for rr in rep_records)
    if total == 0:
        return 0.0
    return sum(1 for rr in rep_records for _, c in rr if c) / total


def _maybe_filter(rep_records, filter_contaminated: bool):
    if not filter_contaminated:
        return [[r for r, _ in rr] for rr in rep_records]
    return [[r for r, c in rr if not c] for rr in rep_records]


def _check_contamination(rate: float, margin: float):
    if rate > CONTAMINATION_LIMIT:
        raise ExperimentError(
            f"contamination rate {rate:.1%} exceeds {CONTAMINATION_LIMIT:.0%}; "
            f"increase the simulation margin (currently {margin:.3g})"
        )


def _assert_duality(sorted_radii, v, count, k_max):
    # exact combinatorial identity: k-th largest <= v  iff  count <= k - 1
    for k in range(1, k_max + 1):
        mk = sorted_radii[k - 1] if len(sorted_radii) >= k else 0.0
        if (mk <= v) != (count <= k - 1):
            raise AssertionError(
                f"order-statistic/count duality violated: k={k}, v={v}, "
                f"M={mk}, N={count}"
            )


def ratio_estimate(numerators, denominators) -> tuple[float, float]:
    """Pooled ratio estimate sum(X)/sum(N) with a clustered standard error.

    Treats each replication as one cluster, which keeps the error honest for
    within-replication dependence between cells.
    """
    x = np.asarray(numerators, dtype=float)
    n = np.asarray(denominators, dtype=float)
    total = n.sum()
    if total <= 0.0:
        return math.nan, math.nan
    p = x.sum() / total
    resid = x - p * n
    reps = len(x)
    if reps < 2:
        return p, math.nan
    var = reps / (reps - 1) * float((resid**2).sum()) / total**2
    return p, math.sqrt(var)


def empirical_tv_to_poisson(counts: np.ndarray, tau: float) -> float:
    """TV distance between the empirical count pmf and the Poisson(tau) law.

    The Poisson pmf is truncated where the tail mass drops below 1e-12 and
    the dropped mass is added back, so the result upper-bounds the exact TV
    by at most that tail.
    """
    q = poisson_pmf_vector(tau)
    tail = max(0.0, 1.0 - float(q.sum()))
    support = max(len(q), int(counts.max()) + 1 if len(counts) else 1)
    p = np.bincount(counts, minlength=support) / len(counts)
    return tv_distance(p, q) + tail


@dataclass
class RhoExperiment:
    rho: float
    threshold: float
    margin: float
    replications: int
    counts: np.ndarray
    pmf: np.ndarray
    mean_count: float
    mean_stderr: float
    tv: float
    tv_boot_mean: float
    tv_bias_corrected: float
    tv_ci: tuple[float, float]
    order_freq: dict[int, float]
    contamination_rate: float
    seconds: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    per_rho: list[RhoExperiment] = field(default_factory=list)


def run_exceedance_experiment(cfg: ExperimentConfig, k_max: int = 5) -> ExperimentResult:
    """Exceedance counts at the calibrated threshold for every rho in the
    config: empirical pmf, TV distance to Poisson(tau) with a bootstrap CI
    and bias correction, and order-statistic hit frequencies for k <= k_max.
    """
    result = ExperimentResult(cfg)
    for rho_index, rho in enumerate(cfg.rho_list):
        started = time.perf_counter()
        v = threshold_v(rho, cfg.tau, cfg.t)
        margin = cfg.margin if cfg.margin is not None else default_margin(rho, cfg.tau, cfg.t)
        rep_records = _collect_replications(cfg, rho_index, rho, margin)
        contamination = _contamination_rate(rep_records)
        _check_contamination(contamination, margin)
        radii_lists = _maybe_filter(rep_records, cfg.filter_contaminated)

        counts = np.empty(cfg.replications, dtype=np.int64)
        order_hits = {k: 0 for k in range(1, k_max + 1)}
        for rep, radii in enumerate(radii_lists):
            radii.sort(reverse=True)
            n_exceed = sum(1 for r in radii if r > v)
            counts[rep] = n_exceed
            _assert_duality(radii, v, n_exceed, k_max)
            for k in range(1, k_max + 1):
                mk = radii[k - 1] if len(radii) >= k else 0.0
                order_hits[k] += mk <= v

        pmf = np.bincount(counts) / len(counts)
        tv = empirical_tv_to_poisson(counts, cfg.tau)
        boot = _bootstrap_tv(counts, cfg.tau, cfg.master_seed, rho_index)
        mean = float(counts.mean())
        stderr = float(counts.std(ddof=1) / math.sqrt(len(counts))) if len(counts) > 1 else math.nan
        result.per_rho.append(
            RhoExperiment(
                rho=rho,
                threshold=v,
                margin=margin,
                replications=cfg.replications,
                counts=counts,
                pmf=pmf,
                mean_count=mean,
                mean_stderr=stderr,
                tv=tv,
                tv_boot_mean=boot["mean"],
                tv_bias_corrected=boot["bias_corrected"],
                tv_ci=boot["ci"],
                order_freq={k: order_hits[k] / cfg.replications for k in order_hits},
                contamination_rate=contamination,
                seconds=time.perf_counter() - started,
            )
        )
    return result


def _bootstrap_tv(counts: np.ndarray, tau: float, master_seed: int, rho_index: int,
                  resamples: int = BOOTSTRAP_RESAMPLES):
    rng = stream(master_seed, TAG_BOOTSTRAP, rho_index)
    n = len(counts)
    tv_hat = empirical_tv_to_poisson(counts, tau)
    values = np.empty(resamples)
    for b in range(resamples):
        resampled = counts[rng.integers(0, n, n)]
        values[b] = empirical_tv_to_poisson(resampled, tau)
    mean = float(values.mean())
    # standard bootstrap bias correction, floored at zero
    corrected = max(0.0, 2.0 * tv_hat - mean)
    lo, hi = np.percentile(values, [2.5, 97.5])
    return {"mean": mean, "bias_corrected": corrected, "ci": (float(lo), float(hi))}


@dataclass
class OrderStatisticRow:
    rho: float
    k: int
    empirical: float
    limit: float
    stderr: float


def run_order_statistics(cfg: ExperimentConfig, k_max: int) -> list[OrderStatisticRow]:
    """Empirical P(k-th largest record <= threshold) against the Poisson
    cumulative limit, re-checking the count/order-statistic duality on every
    replication."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    rows: list[OrderStatisticRow] = []
    outcome = run_exceedance_experiment(cfg, k_max=k_max)
    for per_rho in outcome.per_rho:
        for k in range(1, k_max + 1):
            limit = sum(poisson_pmf(cfg.tau, r) for r in range(k))
            emp = per_rho.order_freq[k]
            stderr = math.sqrt(emp * (1.0 - emp) / per_rho.replications)
            rows.append(OrderStatisticRow(per_rho.rho, k, emp, limit, stderr))
    return rows


@dataclass
class GumbelRow:
    rho: float
    u: float
    threshold: float
    empirical: float
    limit: float


def run_gumbel_curve(cfg: ExperimentConfig, u_grid: list[float]) -> list[GumbelRow]:
    """Empirical law of the maximum record against exp(-exp(-u)).

    One simulation pass per rho is reused across the whole u grid; the
    thresholds (log rho + u)/(2t) are deterministic transforms of u.
    """
    if not u_grid:
        raise ValueError("u_grid must not be empty")
    rows: list[GumbelRow] = []
    u_max = max(u_grid)
    for rho_index, rho in enumerate(cfg.rho_list):
        v_top = (math.log(rho) + max(u_max, 0.0)) / (2.0 * cfg.t)
        margin = cfg.margin if cfg.margin is not None else 4.0 * v_top + 2.0
        rep_records = _collect_replications(cfg, rho_index, rho, margin)
        contamination = _contamination_rate(rep_records)
        _check_contamination(contamination, margin)
        radii_lists = _maybe_filter(rep_records, cfg.filter_contaminated)
        maxima = np.array([max(radii, default=0.0) for radii in radii_lists])
        for u in u_grid:
            thr = (math.log(rho) + u) / (2.0 * cfg.t)
            emp = float((maxima <= thr).mean())
            rows.append(GumbelRow(rho, u, thr, emp, math.exp(-math.exp(-u))))
    return rows


@dataclass
class SurvivalRow:
    v: float
    empirical: float
    stderr: float
    model: float


@dataclass
class TypicalInradiusResult:
    rho: float
    t: float
    pooled: np.ndarray  # sorted inradii of all uncontaminated records
    ks_statistic: float
    survival: list[SurvivalRow]
    contamination_rate: float


def run_typical_inradius_check(
    cfg: ExperimentConfig, v_values=(0.25, 0.5, 1.0)
) -> list[TypicalInradiusResult]:
    """Pool uncontaminated records and compare their law with Exp(2t):
    survival probabilities at the requested thresholds (clustered errors)
    plus the Kolmogorov-Smirnov statistic of the pooled sample.
    """
    results = []
    for rho_index, rho in enumerate(cfg.rho_list):
        margin = cfg.margin if cfg.margin is not None else default_margin(rho, cfg.tau, cfg.t)
        rep_records = _collect_replications(cfg, rho_index, rho, margin)
        contamination = _contamination_rate(rep_records)
        _check_contamination(contamination, margin)
        clean = [[r for r, c in rr if not c] for rr in rep_records]
        pooled = np.sort(np.concatenate([np.asarray(rr) for rr in clean]))
        ks = float(
            sstats.kstest(pooled, sstats.expon(scale=1.0 / (2.0 * cfg.t)).cdf).statistic
        )
        survival = []
        for v in v_values:
            x = [sum(1 for r in rr if r > v) for rr in clean]
            n = [len(rr) for rr in clean]
            est, se = ratio_estimate(x, n)
            survival.append(SurvivalRow(v, est, se, math.exp(-2.0 * cfg.t * v)))
        results.append(
            TypicalInradiusResult(rho, cfg.t, pooled, ks, survival, contamination)
        )
    return results


@dataclass
class AvoidanceRow:
    r: float
    d: float
    replications: int
    empirical: float
    stderr: float
    predicted: float
    envelope: float


def run_two_disk_validation(
    r: float,
    d_list,
    replications: int,
    master_seed: int,
    t_sim: float = 1.0,
    clearance: float = 2.0,
    workers: int = 1,
) -> list[AvoidanceRow]:
    """Empirical probability that the skeleton misses two disks, against the
    closed form and its exponential envelope.

    The disks sit on the x axis at distance d, well inside an axis square
    with `clearance` of padding; consistency of the construction makes the
    window padding irrelevant in law.
    """
    rows = []
    for d_index, d in enumerate(d_list):
        if d < 2.0 * r:
            raise ValueError(f"need d >= 2r, got d={d}, r={r}")
        args = [
            (master_seed, d_index, rep, r, d, t_sim, clearance)
            for rep in range(replications)
        ]
        hits = _map_tasks(_avoidance_task, args, workers)
        emp = float(np.mean(hits))
        stderr = math.sqrt(emp * (1.0 - emp) / replications)
        rows.append(
            AvoidanceRow(
                r=r,
                d=d,
                replications=replications,
                empirical=emp,
                stderr=stderr,
                predicted=two_disk_avoidance(t_sim * r, t_sim * d),
                envelope=two_disk_avoidance_envelope(t_sim * r),
            )
        )
    return rows
