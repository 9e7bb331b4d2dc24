"""Command-line interface.

Subcommands mirror the library runners; every command takes a master seed
and writes CSV output plus a JSON metadata sidecar (<out>.meta.json holding
the command, parameters, versions and wall time).  An optional key=value
config file supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .chenstein import b1_bound, build_subdivision, p_i_analytic, rho0_satisfied
from .experiments import (
    ExperimentConfig,
    default_margin,
    run_exceedance_experiment,
    run_gumbel_curve,
    run_order_statistics,
    run_two_disk_validation,
    run_typical_inradius_check,
)
from .extremes import build_window, collect_records, threshold_v
from .geometry import axis_square
from .laws import agg_bound
from .render import render_svg
from .rng import replication_stream
from .stit import simulate, to_json


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _grid(text: str) -> list[float]:
    """Parse 'start:step:stop' (stop inclusive) or a comma list."""
    if ":" in text:
        start, step, stop = (float(tok) for tok in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]
    return _float_list(text)


def _bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.strip()!r}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


class Opt:
    def __init__(self, name, conv, default=None, required=False, help=""):
        self.name = name  # dest, with underscores
        self.conv = conv
        self.default = default
        self.required = required
        self.help = help


_COMMON = [
    Opt("seed", int, default=0, help="master seed for all random streams"),
    Opt("workers", int, default=1, help="process count for replication-level parallelism"),
]

_COMMANDS: dict[str, list[Opt]] = {
    "simulate": _COMMON + [
        Opt("rho", float, required=True, help="observation window mass"),
        Opt("t", float, default=1.0, help="process time"),
        Opt("tau", float, default=1.0, help="calibration for the highlight threshold"),
        Opt("margin", float, default=0.0, help="extra simulation margin around the window"),
        Opt("svg", str, help="write an SVG rendering here"),
        Opt("json", str, help="write the tessellation as JSON here"),
    ],
    "exceedances": _COMMON + [
        Opt("rho_list", _float_list, required=True),
        Opt("tau", float, required=True),
        Opt("t", float, default=1.0),
        Opt("reps", int, default=1000),
        Opt("margin", float, help="override the automatic margin rule"),
        Opt("filter_contaminated", _bool, default=False),
        Opt("out", str, required=True),
    ],
    "order-stats": _COMMON + [
        Opt("rho", float, required=True),
        Opt("tau", float, required=True),
        Opt("kmax", int, default=5),
        Opt("t", float, default=1.0),
        Opt("reps", int, default=1000),
        Opt("margin", float),
        Opt("filter_contaminated", _bool, default=False),
        Opt("out", str, required=True),
    ],
    "gumbel": _COMMON + [
        Opt("rho", float, required=True),
        Opt("u_grid", _grid, required=True, help="'start:step:stop' or comma list"),
        Opt("t", float, default=1.0),
        Opt("reps", int, default=1000),
        Opt("margin", float),
        Opt("filter_contaminated", _bool, default=False),
        Opt("out", str, required=True),
    ],
    "typical": _COMMON + [
        Opt("rho", float, required=True),
        Opt("t", float, default=1.0),
        Opt("tau", float, default=1.0, help="only enters the margin rule"),
        Opt("reps", int, default=200),
        Opt("margin", float),
        Opt("v_values", _float_list, default=[0.25, 0.5, 1.0]),
        Opt("out", str, required=True),
    ],
    "two-disk": _COMMON + [
        Opt("r", float, required=True),
        Opt("d_list", _float_list, required=True),
        Opt("t_sim", float, default=1.0),
        Opt("reps", int, default=10000),
        Opt("out", str, required=True),
    ],
    "chen-stein": [
        Opt("rho", float, required=True),
        Opt("tau", float, required=True),
        Opt("beta", float, default=0.5),
        Opt("b2", float, default=0.0, help="externally estimated second neighborhood sum"),
        Opt("b3", float, default=0.0, help="externally estimated mixing sum"),
        Opt("out", str, required=True),
    ],
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stitx",
        description="Simulate planar division tessellations and verify "
        "extreme-value statistics of cell inradii.",
    )
    parser.add_argument("--version", action="version", version=f"stitx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, opts in _COMMANDS.items():
        p = sub.add_parser(cmd)
        p.add_argument("--config", help="key=value file with defaults; flags win")
        for opt in opts:
            p.add_argument(
                "--" + opt.name.replace("_", "-"), dest=opt.name, default=None,
                help=opt.help,
            )
    return parser


def _resolve(args: argparse.Namespace) -> dict:
    """Merge precedence: hard defaults < config file < explicit flags."""
    opts = _COMMANDS[args.command]
    filecfg = _load_config(args.config) if args.config else {}
    resolved: dict = {}
    for opt in opts:
        raw = getattr(args, opt.name)
        if raw is None and opt.name in filecfg:
            raw = filecfg[opt.name]
        if raw is None:
            if opt.required:
                raise SystemExit(f"missing required option --{opt.name.replace('_', '-')}")
            resolved[opt.name] = opt.default
        else:
            resolved[opt.name] = opt.conv(raw) if isinstance(raw, str) else raw
    return resolved


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_sidecar(out_path: str, command: str, params: dict, seconds: float) -> None:
    meta = {
        "command": command,
        "params": {k: v for k, v in sorted(params.items())},
        "versions": {
            "stitx": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "wall_time_s": seconds,
    }
    with open(out_path + ".meta.json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _cmd_simulate(p: dict) -> None:
    window = build_window(p["rho"], p["t"])
    sim_window = axis_square(window.side + 2.0 * p["margin"])
    tess = simulate(sim_window, p["t"], replication_stream(p["seed"], 0, 0))
    records = collect_records(tess, window)
    v = threshold_v(p["rho"], p["tau"], p["t"])
    print(
        f"simulated t={p['t']:g} in window side {window.side + 2 * p['margin']:.4g}: "
        f"{len(tess.cells)} cells, {len(tess.segments)} segments, "
        f"{len(records.records)} records, threshold {v:.4g}"
    )
    if p["json"]:
        with open(p["json"], "w") as fh:
            fh.write(to_json(tess) + "\n")
    if p["svg"]:
        render_svg(tess, p["svg"], highlight_threshold=v)


def _experiment_config(p: dict, rho_list: list[float]) -> ExperimentConfig:
    return ExperimentConfig(
        rho_list=rho_list,
        tau=p.get("tau", 1.0),
        t=p.get("t", 1.0),
        replications=p["reps"],
        master_seed=p["seed"],
        margin=p.get("margin"),
        filter_contaminated=p.get("filter_contaminated", False),
        workers=p["workers"],
    )


def _cmd_exceedances(p: dict) -> None:
    cfg = _experiment_config(p, p["rho_list"])
    result = run_exceedance_experiment(cfg)
    header = [
        "rho", "threshold", "margin", "replications", "mean_count", "mean_stderr",
        "tv", "tv_boot_mean", "tv_bias_corrected", "tv_ci_lo", "tv_ci_hi",
        "contamination_rate",
    ]
    rows = [
        [x.rho, x.threshold, x.margin, x.replications, x.mean_count, x.mean_stderr,
         x.tv, x.tv_boot_mean, x.tv_bias_corrected, x.tv_ci[0], x.tv_ci[1],
         x.contamination_rate]
        for x in result.per_rho
    ]
    _write_csv(p["out"], header, rows)
    for x in result.per_rho:
        print(
            f"rho={x.rho:g}: mean N={x.mean_count:.4f} (target {cfg.tau:g}), "
            f"TV={x.tv:.4f} (bias-corrected {x.tv_bias_corrected:.4f})"
        )


def _cmd_order_stats(p: dict) -> None:
    cfg = _experiment_config(p, [p["rho"]])
    rows = run_order_statistics(cfg, p["kmax"])
    _write_csv(
        p["out"],
        ["rho", "k", "empirical", "limit", "stderr"],
        [[r.rho, r.k, r.empirical, r.limit, r.stderr] for r in rows],
    )
    for r in rows:
        print(f"rho={r.rho:g} k={r.k}: empirical {r.empirical:.4f} vs limit {r.limit:.4f}")


def _cmd_gumbel(p: dict) -> None:
    cfg = _experiment_config(p, [p["rho"]])
    rows = run_gumbel_curve(cfg, p["u_grid"])
    _write_csv(
        p["out"],
        ["rho", "u", "threshold", "empirical", "limit"],
        [[r.rho, r.u, r.threshold, r.empirical, r.limit] for r in rows],
    )
    for r in rows:
        print(f"u={r.u:+.3g}: empirical {r.empirical:.4f} vs limit {r.limit:.4f}")


def _cmd_typical(p: dict) -> None:
    cfg = _experiment_config(p, [p["rho"]])
    results = run_typical_inradius_check(cfg, v_values=p["v_values"])
    res = results[0]
    n = len(res.pooled)
    rows = [
        [x, (idx + 1) / n, math.exp(-2.0 * cfg.t * x)]
        for idx, x in enumerate(res.pooled)
    ]
    _write_csv(p["out"], ["inradius", "ecdf", "model_survival"], rows)
    print(f"pooled {n} records; KS statistic vs Exp(2t) = {res.ks_statistic:.5f}")
    for row in res.survival:
        print(
            f"survival at v={row.v:g}: {row.empirical:.4f} ± {row.stderr:.4f} "
            f"(model {row.model:.4f})"
        )


def _cmd_two_disk(p: dict) -> None:
    rows = run_two_disk_validation(
        p["r"], p["d_list"], p["reps"], p["seed"], t_sim=p["t_sim"],
        workers=p["workers"],
    )
    _write_csv(
        p["out"],
        ["r", "d", "replications", "empirical", "stderr", "predicted", "envelope"],
        [[r.r, r.d, r.replications, r.empirical, r.stderr, r.predicted, r.envelope]
         for r in rows],
    )
    for r in rows:
        print(
            f"d={r.d:g}: empirical {r.empirical:.4f} ± {r.stderr:.4f}, "
            f"predicted {r.predicted:.4f}, envelope {r.envelope:.4f}"
        )


def _cmd_chen_stein(p: dict) -> None:
    spec = build_subdivision(p["rho"], p["tau"], p["beta"])
    ok = rho0_satisfied(spec)
    p_i = p_i_analytic(spec) if ok else math.nan
    b1 = b1_bound(spec)
    agg = agg_bound(b1, p["b2"], p["b3"], spec.tau)
    header = [
        "rho", "tau", "beta", "side_count", "squares", "threshold", "diagonal",
        "rho0_ok", "p_i", "sum_p_i", "b1_bound", "b2", "b3", "agg_bound",
    ]
    row = [
        spec.rho, spec.tau, spec.beta, spec.side_count, spec.square_count,
        spec.threshold, spec.diagonal, ok, p_i,
        p_i * spec.square_count if ok else math.nan, b1, p["b2"], p["b3"], agg,
    ]
    _write_csv(p["out"], header, [row])
    print(
        f"|V|={spec.square_count} threshold={spec.threshold:.5f} "
        f"diagonal={spec.diagonal:.5f} rho0_ok={ok} p_i={p_i:.6g} "
        f"b1={b1:.6g} agg_bound={agg:.6g}"
    )


_HANDLERS = {
    "simulate": _cmd_simulate,
    "exceedances": _cmd_exceedances,
    "order-stats": _cmd_order_stats,
    "gumbel": _cmd_gumbel,
    "typical": _cmd_typical,
    "two-disk": _cmd_two_disk,
    "chen-stein": _cmd_chen_stein,
}


def _join_dashed_values(argv: list[str]) -> list[str]:
    # argparse mistakes grid values like "-2:0.5:3" for options; fold them
    # into --u-grid=... form
    out = []
    skip = False
    for idx, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--u-grid" and idx + 1 < len(argv):
            out.append(f"--u-grid={argv[idx + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = _build_parser().parse_args(_join_dashed_values(list(argv)))
    params = _resolve(args)
    started = time.perf_counter()
    _HANDLERS[args.command](params)
    seconds = time.perf_counter() - started
    out = params.get("out")
    if out:
        _write_sidecar(out, args.command, params, seconds)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
