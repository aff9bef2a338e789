"""Analytics for the exclusion-zone (non-uniform) small-cell deployment.

Small cells are only active beyond distance D of every macro site, so the
small-cell tier is a hole process.  This module derives the association
probabilities and loaded densities for that geometry, the serving-distance
distributions conditioned on the user's region, and the region-conditional
coverage and throughput CCDFs.

Every density named ``lambda_small``/``lambda_loaded_small`` here is the
density *inside the outer region* (scheme II already folds in its boost);
feeding the plane-average density of scheme II into these formulas would
double-count the thinning.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .config import (
    DerivedDensities,
    NetworkConfig,
    Scenario,
    effective_small_density,
    region_probabilities,
)
from .quadrature import DEFAULT_SERIES, SeriesSettings, integrate, sum_series
from .specfun import pmf_users_sharing_cell, prob_unloaded, rho


class DistanceRegion(Enum):
    """Conditioning class for a serving-distance distribution."""

    INNER = "inner"              # user inside an exclusion disk, macro-served
    OUTER_TIER1 = "outer_tier1"  # user in the outer region, macro-served
    OUTER_TIER2 = "outer_tier2"  # user in the outer region, small-cell-served


@dataclass(frozen=True)
class NonUniformModel:
    """Precomputed quantities for one non-uniform configuration."""

    cfg: NetworkConfig
    outer_small_density: float
    derived: DerivedDensities
    constant_m: float  # normalization of the small-cell serving-distance PDF

    @property
    def power_weight(self) -> float:
        """(P2/P1)^(2/alpha)."""
        return self.cfg.power_ratio_small_to_macro ** (2.0 / self.cfg.path_loss_exponent)

    @property
    def breakpoint_m(self) -> float:
        """(P2/P1)^(1/alpha) * D, where the small-cell serving PDF changes branch."""
        return self.cfg.power_ratio_small_to_macro ** (1.0 / self.cfg.path_loss_exponent) \
            * self.cfg.inner_radius_m


@dataclass(frozen=True)
class ServingDistancePdf:
    """Branch-wise serving-distance density with its exact CDF."""

    region: DistanceRegion
    support: tuple[float, float]
    pdf: Callable[[float], float]
    cdf: Callable[[float], float]


_NONUNIFORM_SCENARIOS = (Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II, Scenario.MACRO_ONLY)


def derive_densities(cfg: NetworkConfig) -> DerivedDensities:
    """Association probabilities and loaded-BS densities for the hole deployment.

    MacroOnly is accepted as the degenerate zero-small-density case so the
    region-conditional coverage formulas stay available for it.
    """
    if cfg.scenario not in _NONUNIFORM_SCENARIOS:
        raise ValueError(f"derive_densities applies to {', '.join(s.value for s in _NONUNIFORM_SCENARIOS)}")
    lam1 = cfg.lambda_macro
    lam2 = effective_small_density(cfg).small_density_in_outer
    w = cfg.power_ratio_small_to_macro ** (2.0 / cfg.path_loss_exponent)
    d2 = cfg.inner_radius_m ** 2
    p_inner, _ = region_probabilities(cfg)

    lam_a = lam1 + lam2 * w
    q1 = p_inner + (lam1 / lam_a) * math.exp(-math.pi * lam_a * d2)
    loaded1 = lam1 * (1.0 - prob_unloaded(cfg.lambda_users, lam1 / q1))
    if lam2 == 0.0:
        return DerivedDensities(q1=q1, q2_outer=0.0,
                                lambda_loaded_macro=loaded1, lambda_loaded_small=0.0)
    q2_outer = 1.0 - (lam1 / lam_a) * math.exp(-math.pi * lam2 * w * d2)
    loaded2 = lam2 * (1.0 - prob_unloaded(cfg.lambda_users, lam2 / q2_outer))
    return DerivedDensities(q1=q1, q2_outer=q2_outer,
                            lambda_loaded_macro=loaded1, lambda_loaded_small=loaded2)


def build_nonuniform_model(cfg: NetworkConfig) -> NonUniformModel:
    if cfg.scenario not in _NONUNIFORM_SCENARIOS:
        raise ValueError("non-uniform model requires a NonUniform or MacroOnly scenario")
    if cfg.p1 <= cfg.p2:
        warnings.warn(
            "macro received power does not dominate the small-cell power; the "
            "inner-region always-macro-served approximation may be poor",
            RuntimeWarning,
            stacklevel=2,
        )
    lam2 = effective_small_density(cfg).small_density_in_outer
    derived = derive_densities(cfg)
    constant_m = _serving_normalization(cfg, lam2)
    return NonUniformModel(cfg=cfg, outer_small_density=lam2,
                           derived=derived, constant_m=constant_m)


def _serving_normalization(cfg: NetworkConfig, lam2: float) -> float:
    """Normalization constant of the small-cell serving-distance PDF."""
    if lam2 == 0.0:
        return math.inf  # tier-2 serving never happens; only lam2 * M is meaningful
    lam1 = cfg.lambda_macro
    w = cfg.power_ratio_small_to_macro ** (2.0 / cfg.path_loss_exponent)
    lam_a = lam1 + lam2 * w
    d2 = cfg.inner_radius_m ** 2
    outer = math.exp(-math.pi * lam1 * d2)
    return outer / (outer - (lam1 / lam_a) * math.exp(-math.pi * lam_a * d2))


def serving_distance_pdf(model: NonUniformModel, region: DistanceRegion) -> ServingDistancePdf:
    """Serving-distance distribution for the given conditioning class."""
    cfg = model.cfg
    lam1 = cfg.lambda_macro
    lam2 = model.outer_small_density
    d = cfg.inner_radius_m
    w = model.power_weight

    if region is DistanceRegion.INNER:
        if d == 0.0:
            raise ValueError("inner region is empty for D = 0")
        p_inner = 1.0 - math.exp(-math.pi * lam1 * d * d)

        def pdf(x: float) -> float:
            if x < 0.0 or x > d:
                return 0.0
            return 2.0 * math.pi * lam1 * x * math.exp(-math.pi * lam1 * x * x) / p_inner

        def cdf(x: float) -> float:
            if x <= 0.0:
                return 0.0
            if x >= d:
                return 1.0
            return (1.0 - math.exp(-math.pi * lam1 * x * x)) / p_inner

        return ServingDistancePdf(region, (0.0, d), pdf, cdf)

    if region is DistanceRegion.OUTER_TIER1:
        lam_a = lam1 + lam2 * w
        norm = math.exp(-math.pi * lam_a * d * d)

        def pdf(x: float) -> float:
            if x < d:
                return 0.0
            return 2.0 * math.pi * lam_a * x * math.exp(-math.pi * lam_a * x * x) / norm

        def cdf(x: float) -> float:
            if x <= d:
                return 0.0
            return 1.0 - math.exp(-math.pi * lam_a * (x * x - d * d))

        return ServingDistancePdf(region, (d, math.inf), pdf, cdf)

    if region is DistanceRegion.OUTER_TIER2:
        if lam2 == 0.0:
            raise ValueError("small-cell serving distance undefined without small cells")
        m = model.constant_m
        lam_a = lam1 + lam2 * w
        x_b = model.breakpoint_m
        inv_w = 1.0 / w
        c2 = lam1 * inv_w + lam2
        outer = math.exp(-math.pi * lam1 * d * d)

        def pdf(x: float) -> float:
            if x < 0.0:
                return 0.0
            if x <= x_b:
                return m * 2.0 * math.pi * lam2 * x * math.exp(-math.pi * lam2 * x * x)
            return m * 2.0 * math.pi * lam2 * x * math.exp(-math.pi * c2 * x * x) / outer

        def cdf(x: float) -> float:
            if x <= 0.0:
                return 0.0
            if x <= x_b:
                return m * (1.0 - math.exp(-math.pi * lam2 * x * x))
            return 1.0 - m * (lam2 * w / lam_a) * math.exp(-math.pi * c2 * x * x) / outer

        return ServingDistancePdf(region, (0.0, math.inf), pdf, cdf)

    raise ValueError(f"unknown region {region!r}")


def coverage_inner(model: NonUniformModel, threshold: float) -> float:
    """P[SINR > threshold] for a user inside an exclusion disk.

    Such users are treated as macro-served; small-cell interference enters
    through the closest-possible-interferer distance D.
    """
    cfg = model.cfg
    if threshold <= 0.0:
        raise ValueError("threshold must be positive (linear scale)")
    d = cfg.inner_radius_m
    if d <= 0.0:
        raise ValueError("inner region is empty for D = 0")
    alpha = cfg.path_loss_exponent
    lam1 = cfg.lambda_macro
    loaded1 = model.derived.lambda_loaded_macro
    loaded2 = model.derived.lambda_loaded_small
    p_inner = 1.0 - math.exp(-math.pi * lam1 * d * d)
    rho_t = rho(threshold, alpha)
    decay = math.pi * (lam1 + loaded1 * rho_t)
    noise_coef = threshold * cfg.noise_w / cfg.p1
    p_ratio = cfg.power_ratio_small_to_macro
    small_term = math.pi * loaded2 * d * d

    def integrand(x: float) -> float:
        val = x * math.exp(-noise_coef * x ** alpha - decay * x * x)
        if small_term > 0.0:
            val *= math.exp(-small_term * rho(p_ratio * threshold * (x / d) ** alpha, alpha))
        return val

    value, _ = integrate(integrand, 0.0, d)
    return 2.0 * math.pi * lam1 / p_inner * value


def coverage_outer_tier1(model: NonUniformModel, threshold: float) -> float:
    """P[SINR > threshold] for an outer-region user served by the macro tier."""
    cfg = model.cfg
    if threshold <= 0.0:
        raise ValueError("threshold must be positive (linear scale)")
    alpha = cfg.path_loss_exponent
    d = cfg.inner_radius_m
    w = model.power_weight
    lam_a = cfg.lambda_macro + model.outer_small_density * w
    lam_a_loaded = model.derived.lambda_loaded_macro + model.derived.lambda_loaded_small * w
    rho_t = rho(threshold, alpha)
    decay = math.pi * (lam_a + rho_t * lam_a_loaded)
    noise_coef = threshold * cfg.noise_w / cfg.p1

    def integrand(x: float) -> float:
        return x * math.exp(-noise_coef * x ** alpha - decay * x * x)

    value, _ = integrate(integrand, d, math.inf, gaussian_rate=decay)
    return 2.0 * math.pi * lam_a / math.exp(-math.pi * lam_a * d * d) * value


def coverage_outer_tier2(model: NonUniformModel, threshold: float) -> float:
    """P[SINR > threshold] for an outer-region user served by a small cell.

    Two pieces: users closer than the branch point see macro interference
    held off by the exclusion radius; beyond it, by their own association
    constraint.
    """
    cfg = model.cfg
    if threshold <= 0.0:
        raise ValueError("threshold must be positive (linear scale)")
    lam2 = model.outer_small_density
    if lam2 == 0.0:
        raise ValueError("tier 2 undefined without small cells")
    alpha = cfg.path_loss_exponent
    d = cfg.inner_radius_m
    w = model.power_weight
    inv_w = 1.0 / w
    lam1 = cfg.lambda_macro
    loaded1 = model.derived.lambda_loaded_macro
    loaded2 = model.derived.lambda_loaded_small
    m = model.constant_m
    x_b = model.breakpoint_m
    rho_t = rho(threshold, alpha)
    noise_coef = threshold * cfg.noise_w / cfg.p2
    inv_p_ratio = 1.0 / cfg.power_ratio_small_to_macro

    total = 0.0
    if x_b > 0.0:
        macro_term = math.pi * loaded1 * d * d
        decay_near = math.pi * (lam2 + loaded2 * rho_t)

        def integrand_near(x: float) -> float:
            return x * math.exp(
                -noise_coef * x ** alpha
                - macro_term * rho(inv_p_ratio * threshold * (x / d) ** alpha, alpha)
                - decay_near * x * x
            )

        near, _ = integrate(integrand_near, 0.0, x_b)
        total += 2.0 * math.pi * lam2 * m * near

    decay_far = math.pi * ((lam1 * inv_w + lam2) + rho_t * (loaded1 * inv_w + loaded2))

    def integrand_far(x: float) -> float:
        return x * math.exp(-noise_coef * x ** alpha - decay_far * x * x)

    far, _ = integrate(integrand_far, x_b, math.inf, gaussian_rate=decay_far)
    total += 2.0 * math.pi * lam2 * m * far / math.exp(-math.pi * lam1 * d * d)
    return total


def coverage_outer(model: NonUniformModel, threshold: float) -> float:
    """Association-weighted coverage for an outer-region user."""
    q2 = model.derived.q2_outer
    total = (1.0 - q2) * coverage_outer_tier1(model, threshold)
    if q2 > 0.0:
        total += q2 * coverage_outer_tier2(model, threshold)
    return total


def coverage_overall(model: NonUniformModel, threshold: float) -> float:
    """Coverage for a randomly placed user, mixing the two regions."""
    p_inner, p_outer = region_probabilities(model.cfg)
    total = p_outer * coverage_outer(model, threshold)
    if p_inner > 0.0:
        total += p_inner * coverage_inner(model, threshold)
    return total


def _throughput_series(
    rate: float,
    bandwidth: float,
    lambda_users: float,
    lambda_cell: float,
    coverage_fn: Callable[[float], float],
    series: SeriesSettings,
) -> float:
    if rate <= 0.0:
        raise ValueError("rate must be positive")

    def term(n: int) -> float:
        p = pmf_users_sharing_cell(n, lambda_users, lambda_cell)
        if p == 0.0:
            return 0.0
        t_n = 2.0 ** ((n + 1) * rate / bandwidth) - 1.0
        return p * coverage_fn(t_n)

    return sum_series(term, series).value


def throughput_ccdf_inner(
    model: NonUniformModel, rate: float, series: SeriesSettings = DEFAULT_SERIES
) -> float:
    """Single-user throughput CCDF for an inner-region (macro-served) user."""
    cfg = model.cfg
    return _throughput_series(
        rate, cfg.bandwidth_hz, cfg.lambda_users,
        cfg.lambda_macro / model.derived.q1,
        lambda t: coverage_inner(model, t), series,
    )


def throughput_ccdf_outer(
    model: NonUniformModel, rate: float, series: SeriesSettings = DEFAULT_SERIES
) -> float:
    """Single-user throughput CCDF for an outer-region user (both tiers)."""
    cfg = model.cfg
    q2 = model.derived.q2_outer
    total = (1.0 - q2) * _throughput_series(
        rate, cfg.bandwidth_hz, cfg.lambda_users,
        cfg.lambda_macro / model.derived.q1,
        lambda t: coverage_outer_tier1(model, t), series,
    )
    if q2 > 0.0:
        total += q2 * _throughput_series(
            rate, cfg.bandwidth_hz, cfg.lambda_users,
            model.outer_small_density / q2,
            lambda t: coverage_outer_tier2(model, t), series,
        )
    return total


def throughput_ccdf_overall(
    model: NonUniformModel, rate: float, series: SeriesSettings = DEFAULT_SERIES
) -> float:
    """Single-user throughput CCDF for a randomly placed user."""
    p_inner, p_outer = region_probabilities(model.cfg)
    total = p_outer * throughput_ccdf_outer(model, rate, series)
    if p_inner > 0.0:
        total += p_inner * throughput_ccdf_inner(model, rate, series)
    return total
