"""Experiment orchestration: sweeps, figure presets, CSV output.

An :class:`ExperimentSpec` declares what to compute (scenarios, methods,
sweep axis and grid); :func:`run_experiment` evaluates the analytic
pipeline and/or the Monte Carlo simulator and emits rows in a fixed CSV
schema::

    axis,axis_value,scenario,method,value,ci_low,ci_high

with ``ci_*`` empty on analytic rows and all floats printed to 9
significant digits.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import nonuniform, uniform
from .config import CcdfCurve, Method, NetworkConfig, Scenario
from .montecarlo import RegionCurves, SimSettings, estimate_coverage_ccdf, estimate_throughput_ccdf

CSV_HEADER = "axis,axis_value,scenario,method,value,ci_low,ci_high"


class Axis(str, Enum):
    SINR_THRESHOLD_DB = "sinr_threshold_db"
    RATE_BPS = "rate_bps"
    INNER_RADIUS_M = "inner_radius_m"
    DENSITY_RATIO = "density_ratio"


_DISTRIBUTION_AXES = (Axis.SINR_THRESHOLD_DB, Axis.RATE_BPS)


@dataclass(frozen=True)
class ExperimentSpec:
    """One declarative sweep.

    For the deployment axes (inner radius, density ratio) the measured
    quantity is fixed by ``metric`` together with ``fixed_sinr_db`` or
    ``fixed_rate_bps``; for the distribution axes the metric is implied.
    ``label_suffix`` is appended to the scenario column, used by composite
    figure presets to tag panels.
    """

    base: NetworkConfig
    axis: Axis
    grid: np.ndarray
    scenarios: tuple[Scenario, ...]
    methods: tuple[Method, ...] = (Method.ANALYTIC,)
    sim: SimSettings = SimSettings()
    regions: tuple[str, ...] = ("overall",)
    metric: str = "coverage"            # "coverage" | "throughput"
    fixed_sinr_db: float = -5.0
    fixed_rate_bps: float = 0.02
    label_suffix: str = ""

    def __post_init__(self):
        object.__setattr__(self, "grid", np.asarray(self.grid, dtype=float))
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "regions", tuple(self.regions))
        if self.grid.size == 0:
            raise ValueError("sweep grid must be non-empty")
        if np.any(np.diff(self.grid) <= 0.0):
            raise ValueError("sweep grid must be strictly increasing")
        if not self.scenarios:
            raise ValueError("scenario list must be non-empty")
        if not self.methods:
            raise ValueError("method list must be non-empty")
        if self.metric not in ("coverage", "throughput"):
            raise ValueError("metric must be 'coverage' or 'throughput'")
        for region in self.regions:
            if region not in ("overall", "inner", "outer"):
                raise ValueError(f"unknown region {region!r}")


@dataclass(frozen=True)
class ComparisonSummary:
    """Agreement summary between an analytic curve and its MC counterpart."""

    label: str
    max_abs_gap: float
    threshold_at_max_gap: float
    fraction_in_ci: float
    n_points: int


def compare_report(analytic: CcdfCurve, mc: CcdfCurve) -> ComparisonSummary:
    if analytic.thresholds.shape != mc.thresholds.shape or not np.allclose(
        analytic.thresholds, mc.thresholds
    ):
        raise ValueError("curves must share the same threshold grid")
    if mc.ci_low is None or mc.ci_high is None:
        raise ValueError("Monte Carlo curve must carry confidence bounds")
    gaps = np.abs(analytic.values - mc.values)
    k = int(np.argmax(gaps))
    in_ci = (analytic.values >= mc.ci_low) & (analytic.values <= mc.ci_high)
    return ComparisonSummary(
        label=analytic.label,
        max_abs_gap=float(gaps[k]),
        threshold_at_max_gap=float(analytic.thresholds[k]),
        fraction_in_ci=float(np.mean(in_ci)),
        n_points=len(gaps),
    )


def scenario_config(base: NetworkConfig, scenario: Scenario) -> NetworkConfig:
    """Rebind the scenario, zeroing the small-cell density for MacroOnly."""
    lam2 = 0.0 if scenario is Scenario.MACRO_ONLY else (
        base.lambda_small_nominal if base.lambda_small_nominal > 0.0
        else base.lambda_macro * 10.0
    )
    return replace(base, scenario=scenario, lambda_small_nominal=lam2)


def analytic_regions(cfg: NetworkConfig) -> tuple[str, ...]:
    """Regions for which an analytic coverage/throughput curve exists.

    The uniform deployment has no region-conditional decomposition (the
    hole-deployment formulas presuppose small-cell-free exclusion disks);
    the inner region is empty at D = 0.
    """
    if cfg.scenario is Scenario.UNIFORM:
        return ("overall",)
    if cfg.inner_radius_m == 0.0:
        return ("overall", "outer")
    return ("overall", "inner", "outer")


def analytic_coverage_value(cfg: NetworkConfig, threshold_lin: float, region: str = "overall") -> float:
    if region == "overall" and cfg.scenario in (Scenario.UNIFORM, Scenario.MACRO_ONLY):
        return uniform.coverage_uniform(cfg, threshold_lin)
    if region not in analytic_regions(cfg):
        raise ValueError(f"no analytic {region!r} coverage for {cfg.scenario.value}")
    model = nonuniform.build_nonuniform_model(cfg)
    if region == "overall":
        return nonuniform.coverage_overall(model, threshold_lin)
    if region == "inner":
        return nonuniform.coverage_inner(model, threshold_lin)
    return nonuniform.coverage_outer(model, threshold_lin)


def analytic_throughput_value(cfg: NetworkConfig, rate_bps: float, region: str = "overall") -> float:
    if region == "overall" and cfg.scenario in (Scenario.UNIFORM, Scenario.MACRO_ONLY):
        return uniform.throughput_ccdf_uniform(cfg, rate_bps)
    if region not in analytic_regions(cfg):
        raise ValueError(f"no analytic {region!r} throughput for {cfg.scenario.value}")
    model = nonuniform.build_nonuniform_model(cfg)
    if region == "overall":
        return nonuniform.throughput_ccdf_overall(model, rate_bps)
    if region == "inner":
        return nonuniform.throughput_ccdf_inner(model, rate_bps)
    return nonuniform.throughput_ccdf_outer(model, rate_bps)


def analytic_coverage_curve(cfg: NetworkConfig, thresholds_db: np.ndarray,
                            region: str = "overall") -> CcdfCurve:
    thresholds_db = np.asarray(thresholds_db, dtype=float)
    values = [analytic_coverage_value(cfg, 10.0 ** (t / 10.0), region) for t in thresholds_db]
    return CcdfCurve(thresholds=thresholds_db, values=np.array(values),
                     method=Method.ANALYTIC, scenario=cfg.scenario, region=region)


def analytic_throughput_curve(cfg: NetworkConfig, rates_bps: np.ndarray,
                              region: str = "overall") -> CcdfCurve:
    rates_bps = np.asarray(rates_bps, dtype=float)
    values = [analytic_throughput_value(cfg, r, region) for r in rates_bps]
    return CcdfCurve(thresholds=rates_bps, values=np.array(values),
                     method=Method.ANALYTIC, scenario=cfg.scenario, region=region)


def _pick_region(curves: RegionCurves, region: str) -> Optional[CcdfCurve]:
    return {"overall": curves.overall, "inner": curves.inner, "outer": curves.outer}[region]


@dataclass
class ExperimentResult:
    curves: list[CcdfCurve]
    csv_path: Optional[Path]
    warnings: list[str] = field(default_factory=list)


def _distribution_curves(spec: ExperimentSpec, cfg: NetworkConfig,
                         method: Method) -> list[CcdfCurve]:
    coverage = spec.axis is Axis.SINR_THRESHOLD_DB
    if method is Method.ANALYTIC:
        supported = analytic_regions(cfg)
        build = analytic_coverage_curve if coverage else analytic_throughput_curve
        return [build(cfg, spec.grid, region) for region in spec.regions if region in supported]
    estimate = estimate_coverage_ccdf if coverage else estimate_throughput_ccdf
    region_curves = estimate(cfg, spec.sim, spec.grid)
    picked = [_pick_region(region_curves, region) for region in spec.regions]
    return [c for c in picked if c is not None]


def _apply_axis_value(spec: ExperimentSpec, cfg: NetworkConfig, value: float) -> NetworkConfig:
    if spec.axis is Axis.INNER_RADIUS_M:
        return replace(cfg, inner_radius_m=value)
    if spec.axis is Axis.DENSITY_RATIO:
        if cfg.scenario is Scenario.MACRO_ONLY:
            return cfg
        return replace(cfg, lambda_small_nominal=value * cfg.lambda_macro)
    raise ValueError(f"{spec.axis} is not a deployment axis")


def _sweep_curve(spec: ExperimentSpec, cfg: NetworkConfig, method: Method) -> CcdfCurve:
    coverage = spec.metric == "coverage"
    values = np.empty(spec.grid.size)
    lo = np.full(spec.grid.size, np.nan)
    hi = np.full(spec.grid.size, np.nan)
    for k, x in enumerate(spec.grid):
        point_cfg = _apply_axis_value(spec, cfg, float(x))
        if method is Method.ANALYTIC:
            if coverage:
                values[k] = analytic_coverage_value(point_cfg, 10.0 ** (spec.fixed_sinr_db / 10.0))
            else:
                values[k] = analytic_throughput_value(point_cfg, spec.fixed_rate_bps)
        else:
            if coverage:
                est = estimate_coverage_ccdf(point_cfg, spec.sim, np.array([spec.fixed_sinr_db]))
            else:
                est = estimate_throughput_ccdf(point_cfg, spec.sim, np.array([spec.fixed_rate_bps]))
            values[k] = est.overall.values[0]
            lo[k] = est.overall.ci_low[0]
            hi[k] = est.overall.ci_high[0]
    ci_low = None if method is Method.ANALYTIC else lo
    ci_high = None if method is Method.ANALYTIC else hi
    return CcdfCurve(thresholds=spec.grid.copy(), values=values, method=method,
                     scenario=cfg.scenario, region="overall", ci_low=ci_low, ci_high=ci_high)


def run_experiment(spec: ExperimentSpec, out_path: Optional[Path] = None) -> ExperimentResult:
    """Evaluate every (scenario, method) of the spec; optionally write CSV.

    Numerical warnings (series truncation, quadrature trouble) are captured
    and reported in the result so callers can reflect them in exit codes.
    """
    curves: list[CcdfCurve] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for scenario in spec.scenarios:
            cfg = scenario_config(spec.base, scenario)
            for method in spec.methods:
                if spec.axis in _DISTRIBUTION_AXES:
                    curves.extend(_distribution_curves(spec, cfg, method))
                else:
                    curves.append(_sweep_curve(spec, cfg, method))
    notes = [str(w.message) for w in caught if issubclass(w.category, RuntimeWarning)]
    result = ExperimentResult(curves=curves, csv_path=None, warnings=notes)
    if out_path is not None:
        result.csv_path = write_csv(Path(out_path), spec.axis, curves, spec.label_suffix)
    return result


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def csv_rows(axis: Axis, curves: Sequence[CcdfCurve], label_suffix: str = "") -> list[str]:
    rows = [CSV_HEADER]
    for curve in curves:
        label = curve.label + label_suffix
        mc = curve.ci_low is not None
        for k in range(curve.thresholds.size):
            lo = _fmt(curve.ci_low[k]) if mc and math.isfinite(curve.ci_low[k]) else ""
            hi = _fmt(curve.ci_high[k]) if mc and math.isfinite(curve.ci_high[k]) else ""
            rows.append(
                f"{axis.value},{_fmt(curve.thresholds[k])},{label},"
                f"{curve.method.value},{_fmt(curve.values[k])},{lo},{hi}"
            )
    return rows


def write_csv(path: Path, axis: Axis, curves: Sequence[CcdfCurve],
              label_suffix: str = "", append: bool = False) -> Path:
    path = Path(path)
    rows = csv_rows(axis, curves, label_suffix)
    if append and path.exists():
        rows = rows[1:]  # keep the single header written by the first chunk
    with open(path, "a" if append else "w", encoding="ascii") as fh:
        fh.write("\n".join(rows) + "\n")
    return path


def parse_config_text(text: str) -> tuple[NetworkConfig, SimSettings]:
    """Parse flat ``key = value`` configuration text.

    Keys are exactly the :class:`NetworkConfig` and :class:`SimSettings`
    field names; ``#`` starts a comment; unknown keys are hard errors.
    """
    net_fields = {f.name: f for f in dataclasses.fields(NetworkConfig)}
    sim_fields = {f.name: f for f in dataclasses.fields(SimSettings)}
    net_kwargs: dict = {}
    sim_kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in net_fields:
            net_kwargs[key] = Scenario(value) if key == "scenario" else float(value)
        elif key in sim_fields:
            if key in ("trials", "seed", "parallel_streams"):
                sim_kwargs[key] = int(value)
            else:
                sim_kwargs[key] = float(value)
        else:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
    return NetworkConfig(**net_kwargs), SimSettings(**sim_kwargs)


def load_config_file(path: Path) -> tuple[NetworkConfig, SimSettings]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


SINR_GRID_DB = np.arange(-10.0, 20.5, 1.0)
RATE_GRID_BPS = np.logspace(-3, 1, 33)
RADIUS_GRID_M = np.arange(100.0, 1001.0, 50.0)
_ALL_SCENARIOS = (Scenario.MACRO_ONLY, Scenario.UNIFORM,
                  Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II)
_BOTH_METHODS = (Method.ANALYTIC, Method.MONTE_CARLO)


def figure_specs(number: int, base: Optional[NetworkConfig] = None,
                 sim: Optional[SimSettings] = None,
                 methods: Optional[tuple[Method, ...]] = None) -> list[ExperimentSpec]:
    """Sweep specs reproducing the reference figures 2 through 7.

    Composite figures (4 and 7) expand into one spec per panel, tagged via
    ``label_suffix``.  The radius sweeps default to the analytic method
    only; Monte Carlo over a whole radius grid multiplies the trial budget
    by the grid size and must be requested explicitly.
    """
    base = base if base is not None else NetworkConfig()
    sim = sim if sim is not None else SimSettings()
    if number == 2:
        return [ExperimentSpec(
            base=replace(base, scenario=Scenario.NON_UNIFORM_I), axis=Axis.SINR_THRESHOLD_DB,
            grid=SINR_GRID_DB, scenarios=(Scenario.NON_UNIFORM_I,),
            methods=methods or _BOTH_METHODS, sim=sim,
            regions=("inner", "outer", "overall"),
        )]
    if number == 3:
        return [ExperimentSpec(
            base=base, axis=Axis.SINR_THRESHOLD_DB, grid=SINR_GRID_DB,
            scenarios=_ALL_SCENARIOS, methods=methods or _BOTH_METHODS, sim=sim,
        )]
    if number == 4:
        return [
            ExperimentSpec(
                base=replace(base, lambda_small_nominal=ratio * base.lambda_macro),
                axis=Axis.INNER_RADIUS_M, grid=RADIUS_GRID_M,
                scenarios=_ALL_SCENARIOS, methods=methods or (Method.ANALYTIC,),
                sim=sim, metric="coverage", fixed_sinr_db=t_db,
                label_suffix=f"|ratio{ratio:g}|T{t_db:g}dB",
            )
            for ratio in (10.0, 5.0) for t_db in (-5.0, 10.0)
        ]
    if number == 5:
        return [ExperimentSpec(
            base=replace(base, scenario=Scenario.NON_UNIFORM_I), axis=Axis.RATE_BPS,
            grid=RATE_GRID_BPS, scenarios=(Scenario.NON_UNIFORM_I,),
            methods=methods or _BOTH_METHODS, sim=sim,
            regions=("inner", "outer"),
        )]
    if number == 6:
        return [ExperimentSpec(
            base=base, axis=Axis.RATE_BPS, grid=RATE_GRID_BPS,
            scenarios=_ALL_SCENARIOS, methods=methods or _BOTH_METHODS, sim=sim,
        )]
    if number == 7:
        return [
            ExperimentSpec(
                base=replace(base, lambda_small_nominal=ratio * base.lambda_macro),
                axis=Axis.INNER_RADIUS_M, grid=RADIUS_GRID_M,
                scenarios=_ALL_SCENARIOS, methods=methods or (Method.ANALYTIC,),
                sim=sim, metric="throughput", fixed_rate_bps=rate,
                label_suffix=f"|ratio{ratio:g}|rate{rate:g}bps",
            )
            for ratio in (10.0, 5.0) for rate in (0.02, 1.0)
        ]
    raise ValueError("figure number must be in 2..7")


def run_figure(number: int, out_path: Path, base: Optional[NetworkConfig] = None,
               sim: Optional[SimSettings] = None,
               methods: Optional[tuple[Method, ...]] = None) -> ExperimentResult:
    """Run all panels of one figure preset into a single CSV."""
    specs = figure_specs(number, base=base, sim=sim, methods=methods)
    curves: list[CcdfCurve] = []
    notes: list[str] = []
    out_path = Path(out_path)
    for k, spec in enumerate(specs):
        result = run_experiment(spec)
        notes.extend(result.warnings)
        write_csv(out_path, spec.axis, result.curves, spec.label_suffix, append=k > 0)
        curves.extend(result.curves)
    return ExperimentResult(curves=curves, csv_path=out_path, warnings=notes)
