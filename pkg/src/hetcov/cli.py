"""Command-line front end.

Subcommands: ``coverage``, ``throughput``, ``sweep``, ``figure {2..7}`` and
``validate``.  Every run writes the fixed-schema CSV; ``figure`` renders a
PNG next to it unless ``--no-plot`` is given, other subcommands plot on
``--plot``.

Exit codes: 0 success, 1 internal numeric failure, 2 bad usage or
configuration, 3 completed with numeric warnings (series truncation or
quadrature trouble).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import Method, NetworkConfig, Scenario
from .experiments import (
    Axis,
    ExperimentResult,
    ExperimentSpec,
    compare_report,
    load_config_file,
    run_experiment,
    run_figure,
    RATE_GRID_BPS,
    SINR_GRID_DB,
)
from .montecarlo import SimSettings
from .quadrature import QuadratureError

_ALL_SCENARIOS = (Scenario.MACRO_ONLY, Scenario.UNIFORM,
                  Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key=value configuration file")
    p.add_argument("--scenario", action="append", choices=[s.value for s in Scenario],
                   help="deployment scheme (repeatable)")
    p.add_argument("--method", action="append", choices=[m.value for m in Method],
                   help="evaluation method (repeatable)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--out", type=Path, help="output CSV path")
    p.add_argument("--d-meters", type=float, help="exclusion radius D in meters")
    p.add_argument("--density-ratio", type=float,
                   help="small-cell density as a multiple of the macro density")
    p.add_argument("--window-radius", type=float, help="simulation window radius in meters")
    p.add_argument("--grid", help="sweep grid as lo:hi:step or comma-separated values")
    p.add_argument("--plot", dest="plot", action="store_true", default=None,
                   help="render a PNG next to the CSV")
    p.add_argument("--no-plot", dest="plot", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hetcov",
        description="Coverage and throughput for two-tier networks with "
                    "exclusion-zone small-cell deployment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("coverage", "SINR CCDF over a dB threshold grid"),
        ("throughput", "single-user rate CCDF over a bps grid"),
        ("sweep", "sweep a deployment or distribution axis"),
        ("figure", "reproduce one of the reference figures 2..7"),
        ("validate", "compare analytic curves against Monte Carlo"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--axis", required=True, choices=[a.value for a in Axis])
            p.add_argument("--at-db", type=float, default=-5.0,
                           help="fixed SINR threshold for deployment-axis coverage sweeps")
            p.add_argument("--at-bps", type=float, default=0.02,
                           help="fixed rate threshold for deployment-axis throughput sweeps")
            p.add_argument("--metric", choices=["coverage", "throughput"], default="coverage")
        if name == "figure":
            p.add_argument("number", type=int, choices=range(2, 8))
        if name == "coverage":
            p.add_argument("--region", action="append", choices=["overall", "inner", "outer"],
                           help="conditioning region (repeatable)")
    return parser


def _parse_grid(text: str) -> np.ndarray:
    if ":" in text:
        lo, hi, step = (float(x) for x in text.split(":"))
        return np.arange(lo, hi + step / 2.0, step)
    return np.array([float(x) for x in text.split(",")])


def _load_base(args) -> tuple[NetworkConfig, SimSettings]:
    if args.config is not None:
        try:
            cfg, sim = load_config_file(args.config)
        except OSError as exc:
            raise ValueError(f"cannot read config file {args.config}: {exc}") from exc
    else:
        cfg, sim = NetworkConfig(), SimSettings()
    if args.d_meters is not None:
        cfg = replace(cfg, inner_radius_m=args.d_meters)
    if args.density_ratio is not None and cfg.scenario is not Scenario.MACRO_ONLY:
        cfg = replace(cfg, lambda_small_nominal=args.density_ratio * cfg.lambda_macro)
    if args.trials is not None:
        sim = replace(sim, trials=args.trials)
    if args.seed is not None:
        sim = replace(sim, seed=args.seed)
    if args.window_radius is not None:
        sim = replace(sim, window_radius_m=args.window_radius)
    return cfg, sim


def _scenarios(args) -> tuple[Scenario, ...]:
    if args.scenario:
        return tuple(Scenario(s) for s in args.scenario)
    return _ALL_SCENARIOS


def _methods(args, default: tuple[Method, ...]) -> tuple[Method, ...]:
    if args.method:
        return tuple(Method(m) for m in args.method)
    return default


def _maybe_plot(result: ExperimentResult, axis: Axis, out_csv: Path, want: bool,
                ylabel: str) -> None:
    if not want or not result.curves:
        return
    from .plotting import plot_curves

    plot_curves(result.curves, axis, out_csv.with_suffix(".png"), ylabel=ylabel)


def _finish(result: ExperimentResult) -> int:
    for note in result.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if result.csv_path is not None:
        print(f"wrote {result.csv_path}")
    return 3 if result.warnings else 0


def _cmd_distribution(args, coverage: bool) -> int:
    cfg, sim = _load_base(args)
    axis = Axis.SINR_THRESHOLD_DB if coverage else Axis.RATE_BPS
    grid = _parse_grid(args.grid) if args.grid else (SINR_GRID_DB if coverage else RATE_GRID_BPS)
    regions = tuple(getattr(args, "region", None) or ("overall",))
    spec = ExperimentSpec(
        base=cfg, axis=axis, grid=grid, scenarios=_scenarios(args),
        methods=_methods(args, (Method.ANALYTIC, Method.MONTE_CARLO)),
        sim=sim, regions=regions,
    )
    out = args.out or Path(f"{'coverage' if coverage else 'throughput'}.csv")
    result = run_experiment(spec, out_path=out)
    _maybe_plot(result, axis, out, bool(args.plot),
                "coverage probability" if coverage else "rate CCDF")
    return _finish(result)


def _cmd_sweep(args) -> int:
    cfg, sim = _load_base(args)
    axis = Axis(args.axis)
    if args.grid:
        grid = _parse_grid(args.grid)
    elif axis is Axis.SINR_THRESHOLD_DB:
        grid = SINR_GRID_DB
    elif axis is Axis.RATE_BPS:
        grid = RATE_GRID_BPS
    elif axis is Axis.INNER_RADIUS_M:
        grid = np.arange(100.0, 1001.0, 50.0)
    else:
        grid = np.arange(1.0, 21.0, 1.0)
    spec = ExperimentSpec(
        base=cfg, axis=axis, grid=grid, scenarios=_scenarios(args),
        methods=_methods(args, (Method.ANALYTIC,)), sim=sim,
        metric=args.metric, fixed_sinr_db=args.at_db, fixed_rate_bps=args.at_bps,
    )
    out = args.out or Path("sweep.csv")
    result = run_experiment(spec, out_path=out)
    ylabel = "coverage probability" if args.metric == "coverage" else "rate CCDF"
    _maybe_plot(result, axis, out, bool(args.plot), ylabel)
    return _finish(result)


def _cmd_figure(args) -> int:
    cfg, sim = _load_base(args)
    methods = tuple(Method(m) for m in args.method) if args.method else None
    out = args.out or Path(f"fig{args.number}.csv")
    result = run_figure(args.number, out, base=cfg, sim=sim, methods=methods)
    want_plot = args.plot is not False  # figures plot by default
    axis = Axis.INNER_RADIUS_M if args.number in (4, 7) else (
        Axis.SINR_THRESHOLD_DB if args.number in (2, 3) else Axis.RATE_BPS)
    ylabel = "coverage probability" if args.number in (2, 3, 4) else "rate CCDF"
    _maybe_plot(result, axis, out, want_plot, ylabel)
    return _finish(result)


def _cmd_validate(args) -> int:
    cfg, sim = _load_base(args)
    spec = ExperimentSpec(
        base=cfg, axis=Axis.SINR_THRESHOLD_DB, grid=SINR_GRID_DB,
        scenarios=_scenarios(args), methods=(Method.ANALYTIC, Method.MONTE_CARLO),
        sim=sim, regions=("overall", "inner", "outer"),
    )
    result = run_experiment(spec, out_path=args.out)
    analytic = {c.label: c for c in result.curves if c.method is Method.ANALYTIC}
    mc = {c.label: c for c in result.curves if c.method is Method.MONTE_CARLO}
    worst = 0.0
    for label in sorted(analytic):
        if label not in mc:
            continue
        summary = compare_report(analytic[label], mc[label])
        worst = max(worst, summary.max_abs_gap)
        print(f"{label:28s} max gap {summary.max_abs_gap:.4f} "
              f"at {summary.threshold_at_max_gap:+.1f} dB, "
              f"{100 * summary.fraction_in_ci:.0f}% of points inside the MC 95% CI")
    print(f"worst gap across curves: {worst:.4f}")
    code = _finish(result)
    return code if worst <= 0.03 else max(code, 1)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "coverage":
            return _cmd_distribution(args, coverage=True)
        if args.command == "throughput":
            return _cmd_distribution(args, coverage=False)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "figure":
            return _cmd_figure(args)
        if args.command == "validate":
            return _cmd_validate(args)
        raise SystemExit(f"unknown command {args.command!r}")
    except SystemExit:
        raise
    except (ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
