"""Ground-truth Monte Carlo simulator for the two-tier downlink.

Samples network realizations on a disk window, associates every user to the
strongest BS by long-term received power, silences BSs that attracted no
user, and draws Rayleigh-faded SINR for the typical user at the origin
(Slivnyak).  All statistics are measured at the origin only; the window is
sized so truncated far interference is negligible at path-loss exponents
around 4.

Reproducibility: every trial draws from a counter-based Philox stream keyed
by (seed, trial_index), so serial and parallel runs produce bit-identical
results for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .config import CcdfCurve, Method, NetworkConfig, Scenario, effective_small_density

_THREAD_ENV = "HETNET_SG_THREADS"

# Expected macro-BS count used to size the default window.
_DEFAULT_WINDOW_MACROS = 500.0


@dataclass(frozen=True)
class SimSettings:
    """Simulation controls.

    ``window_radius_m = None`` resolves to the radius containing
    ``_DEFAULT_WINDOW_MACROS`` expected macro BSs.  The window must span at
    least five times both the exclusion radius and the mean macro spacing.
    """

    window_radius_m: Optional[float] = None
    trials: int = 10_000
    seed: int = 0
    parallel_streams: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.parallel_streams < 1:
            raise ValueError("parallel_streams must be positive")

    def resolved_window(self, cfg: NetworkConfig) -> float:
        radius = self.window_radius_m
        if radius is None:
            radius = math.sqrt(_DEFAULT_WINDOW_MACROS / (math.pi * cfg.lambda_macro))
        floor = 5.0 * max(cfg.inner_radius_m, 1.0 / math.sqrt(math.pi * cfg.lambda_macro))
        if radius < floor:
            raise ValueError(
                f"window_radius_m {radius:.0f} m too small: need >= {floor:.0f} m "
                "(5x the larger of the exclusion radius and mean macro spacing)"
            )
        return radius


@dataclass(frozen=True)
class NetworkRealization:
    """One sampled network with (optional) association results.

    ``user_points`` includes the typical user at the origin as row 0.  BS
    indices are global: macro i maps to i, small j maps to
    ``len(macro_points) + j``.  Association fields are ``None`` until
    :func:`associate_and_load` fills them.
    """

    macro_points: np.ndarray             # (n1, 2) m
    small_points: np.ndarray             # (n2, 2) m
    user_points: np.ndarray              # (nu + 1, 2) m, origin first
    load_counts: Optional[np.ndarray] = None       # (n1 + n2,) users per BS
    user_serving_index: Optional[np.ndarray] = None  # (nu + 1,) global BS index
    user_serving_tier: Optional[np.ndarray] = None   # (nu + 1,) 1 or 2
    user_serving_dist: Optional[np.ndarray] = None   # (nu + 1,) m

    @property
    def n_macro(self) -> int:
        return len(self.macro_points)


def trial_rng(seed: int, trial_index: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for one (trial, stream) pair."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial_index, stream))
    return np.random.Generator(np.random.Philox(ss))


def _sample_disk(rng: np.random.Generator, density: float, radius: float) -> np.ndarray:
    n = rng.poisson(density * math.pi * radius * radius)
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def _nearest(points: np.ndarray, ref: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distance and index of the closest ``ref`` row for every ``points`` row."""
    if len(ref) == 0:
        n = len(points)
        return np.full(n, np.inf), np.full(n, -1, dtype=np.intp)
    if len(points) * len(ref) <= 4_000_000:
        d = cdist(points, ref)
        idx = d.argmin(axis=1)
        return d[np.arange(len(points)), idx], idx
    dist, idx = cKDTree(ref).query(points)
    return dist, idx.astype(np.intp)


def sample_realization(cfg: NetworkConfig, sim: SimSettings, trial_index: int) -> NetworkRealization:
    """Draw one network: macro PPP, small-cell (hole) process, user PPP.

    The macro window is padded by the exclusion radius so holes are exact up
    to the edge of the small-cell/user window.  Small cells are sampled at
    the scenario's outer-region density and, for the non-uniform schemes,
    deleted within D of any macro site.
    """
    rng = trial_rng(sim.seed, trial_index, stream=0)
    radius = sim.resolved_window(cfg)
    d = cfg.inner_radius_m

    macro = _sample_disk(rng, cfg.lambda_macro, radius + d)
    small_density = effective_small_density(cfg).small_density_in_outer
    small = _sample_disk(rng, small_density, radius)
    if cfg.scenario in (Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II) and len(small) and d > 0.0:
        dist_to_macro, _ = _nearest(small, macro)
        small = small[dist_to_macro > d]
    users = _sample_disk(rng, cfg.lambda_users, radius)
    users = np.vstack((np.zeros((1, 2)), users))
    return NetworkRealization(macro_points=macro, small_points=small, user_points=users)


def associate_and_load(real: NetworkRealization, cfg: NetworkConfig) -> NetworkRealization:
    """Attach every user to the BS with the strongest long-term received power.

    Fading plays no role here; within a tier the strongest BS is the closest
    one, so only the two per-tier nearest candidates compete.  BSs with zero
    load are silent on data channels.
    """
    d1, i1 = _nearest(real.user_points, real.macro_points)
    d2, i2 = _nearest(real.user_points, real.small_points)
    if len(real.macro_points) == 0:
        raise ValueError("realization contains no macro BS; enlarge the window")
    alpha = cfg.path_loss_exponent
    with np.errstate(divide="ignore"):  # a user exactly on a BS gets infinite power
        rx1 = cfg.p1 * d1 ** -alpha
        rx2 = np.where(np.isfinite(d2), cfg.p2 * d2 ** -alpha, -np.inf)
    tier = np.where(rx1 >= rx2, 1, 2).astype(np.int8)
    serving = np.where(tier == 1, i1, real.n_macro + i2)
    dist = np.where(tier == 1, d1, d2)
    loads = np.bincount(serving, minlength=real.n_macro + len(real.small_points))
    return replace(real, load_counts=loads, user_serving_index=serving,
                   user_serving_tier=tier, user_serving_dist=dist)


def sample_sinr(real: NetworkRealization, cfg: NetworkConfig, rng_stream: np.random.Generator) -> float:
    """Instantaneous SINR of the typical user under unit-mean Rayleigh fading.

    Interference sums over loaded BSs only, excluding the serving one.
    """
    if real.load_counts is None:
        raise ValueError("realization must be associated first")
    serving = int(real.user_serving_index[0])
    assert real.load_counts[serving] >= 1, "serving BS must carry the typical user"
    n1 = real.n_macro
    alpha = cfg.path_loss_exponent
    bs = np.vstack((real.macro_points, real.small_points))
    power = np.empty(len(bs))
    power[:n1] = cfg.p1
    power[n1:] = cfg.p2
    dist = np.hypot(bs[:, 0], bs[:, 1])

    h = rng_stream.standard_exponential(len(bs))
    interferer = real.load_counts > 0
    interferer[serving] = False
    interference = float(np.sum(power[interferer] * h[interferer] * dist[interferer] ** -alpha))
    p_serv = cfg.p1 if real.user_serving_tier[0] == 1 else cfg.p2
    signal = p_serv * h[serving] * float(real.user_serving_dist[0]) ** -alpha
    return signal / (interference + cfg.noise_w)


@dataclass(frozen=True)
class TrialRecords:
    """Per-trial typical-user outcomes, in trial order."""

    sinr: Optional[np.ndarray]        # linear SINR (None in association-only mode)
    rate: Optional[np.ndarray]        # bps, bandwidth split across the serving cell
    inner: np.ndarray                 # typical user inside an exclusion disk
    serving_tier: np.ndarray          # 1 or 2
    serving_dist: np.ndarray          # m


def _run_chunk(cfg: NetworkConfig, sim: SimSettings, lo: int, hi: int, full: bool) -> TrialRecords:
    n = hi - lo
    sinr = np.empty(n) if full else None
    rate = np.empty(n) if full else None
    inner = np.empty(n, dtype=bool)
    tier = np.empty(n, dtype=np.int8)
    dist = np.empty(n)
    d = cfg.inner_radius_m
    for k in range(n):
        t = lo + k
        real = sample_realization(cfg, sim, t)
        if full:
            real = associate_and_load(real, cfg)
            s = sample_sinr(real, cfg, trial_rng(sim.seed, t, stream=1))
            sinr[k] = s
            load = real.load_counts[int(real.user_serving_index[0])]
            rate[k] = cfg.bandwidth_hz / load * math.log2(1.0 + s)
            tier[k] = real.user_serving_tier[0]
            dist[k] = real.user_serving_dist[0]
            r1 = real.macro_points
            nearest_macro = math.sqrt(float(np.min((r1 ** 2).sum(axis=1)))) if len(r1) else math.inf
        else:
            # Association of the typical user only: nearest candidate per tier.
            d1, _ = _nearest(np.zeros((1, 2)), real.macro_points)
            d2, _ = _nearest(np.zeros((1, 2)), real.small_points)
            rx1 = cfg.p1 * float(d1[0]) ** -cfg.path_loss_exponent
            rx2 = cfg.p2 * float(d2[0]) ** -cfg.path_loss_exponent if math.isfinite(d2[0]) else -math.inf
            tier[k] = 1 if rx1 >= rx2 else 2
            dist[k] = d1[0] if tier[k] == 1 else d2[0]
            nearest_macro = float(d1[0])
        inner[k] = nearest_macro <= d
    return TrialRecords(sinr=sinr, rate=rate, inner=inner, serving_tier=tier, serving_dist=dist)


def _worker_count(sim: SimSettings) -> int:
    cap = os.environ.get(_THREAD_ENV)
    workers = sim.parallel_streams
    if cap is not None:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def run_trials(cfg: NetworkConfig, sim: SimSettings, full: bool = True) -> TrialRecords:
    """Run ``sim.trials`` independent trials, optionally fanned out over
    processes.  Results are identical for any worker count."""
    workers = _worker_count(sim)
    if workers == 1 or sim.trials < 2 * workers:
        return _run_chunk(cfg, sim, 0, sim.trials, full)
    bounds = np.linspace(0, sim.trials, workers + 1, dtype=int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [cfg] * workers, [sim] * workers,
                              bounds[:-1], bounds[1:], [full] * workers))
    cat = lambda key: (np.concatenate([getattr(p, key) for p in parts])
                       if getattr(parts[0], key) is not None else None)
    return TrialRecords(sinr=cat("sinr"), rate=cat("rate"), inner=cat("inner"),
                        serving_tier=cat("serving_tier"), serving_dist=cat("serving_dist"))


def wilson_interval(successes: np.ndarray, n: int, z: float = 1.959963984540054) -> tuple[np.ndarray, np.ndarray]:
    """Wilson 95% score interval for binomial proportions."""
    if n == 0:
        raise ValueError("need at least one sample")
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return np.clip(center - half, 0.0, 1.0), np.clip(center + half, 0.0, 1.0)


@dataclass(frozen=True)
class RegionCurves:
    """Empirical CCDFs: unconditional plus region-conditional (when sampled)."""

    overall: CcdfCurve
    inner: Optional[CcdfCurve]
    outer: Optional[CcdfCurve]


def _empirical_ccdf(samples: np.ndarray, grid: np.ndarray, thresholds_out: np.ndarray,
                    cfg: NetworkConfig, region: str) -> CcdfCurve:
    sorted_samples = np.sort(samples)
    n = len(sorted_samples)
    above = n - np.searchsorted(sorted_samples, grid, side="right")
    lo, hi = wilson_interval(above.astype(float), n)
    return CcdfCurve(thresholds=thresholds_out, values=above / n,
                     method=Method.MONTE_CARLO, scenario=cfg.scenario,
                     region=region, ci_low=lo, ci_high=hi)


def _region_curves(samples: np.ndarray, inner: np.ndarray, grid: np.ndarray,
                   thresholds_out: np.ndarray, cfg: NetworkConfig) -> RegionCurves:
    overall = _empirical_ccdf(samples, grid, thresholds_out, cfg, "overall")
    inner_curve = (_empirical_ccdf(samples[inner], grid, thresholds_out, cfg, "inner")
                   if inner.any() else None)
    outer_curve = (_empirical_ccdf(samples[~inner], grid, thresholds_out, cfg, "outer")
                   if (~inner).any() else None)
    return RegionCurves(overall=overall, inner=inner_curve, outer=outer_curve)


def estimate_coverage_ccdf(cfg: NetworkConfig, sim: SimSettings,
                           thresholds_db: np.ndarray) -> RegionCurves:
    """Empirical P[SINR > T] over a dB grid, with Wilson 95% intervals."""
    thresholds_db = np.asarray(thresholds_db, dtype=float)
    rec = run_trials(cfg, sim, full=True)
    grid = 10.0 ** (thresholds_db / 10.0)
    return _region_curves(rec.sinr, rec.inner, grid, thresholds_db, cfg)


def estimate_throughput_ccdf(cfg: NetworkConfig, sim: SimSettings,
                             rates_bps: np.ndarray) -> RegionCurves:
    """Empirical P[rate share > rho] over a bps grid.

    Each trial's rate is the bandwidth split of the typical user's serving
    cell (its own attachment included) times log2(1 + SINR).
    """
    rates_bps = np.asarray(rates_bps, dtype=float)
    rec = run_trials(cfg, sim, full=True)
    return _region_curves(rec.rate, rec.inner, rates_bps, rates_bps, cfg)
