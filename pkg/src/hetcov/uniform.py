"""Baseline analytics for the uniform small-cell deployment.

Association probabilities, loaded-BS densities, per-tier coverage and
single-user throughput when the small-cell tier is a homogeneous PPP over
the whole plane.  The macro-only network is the ``lambda_small_nominal = 0``
special case of every formula here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import NetworkConfig
from .quadrature import DEFAULT_SERIES, SeriesSettings, integrate, sum_series
from .specfun import pmf_users_sharing_cell, prob_unloaded, rho


@dataclass(frozen=True)
class UniformEquivalentDensities:
    """Per-tier equivalent densities, plain and load-thinned.

    ``lambda_eq_i`` folds the other tier into tier i's geometry through the
    power ratio to the 2/alpha; the loaded variants apply the same
    combination to the load-thinned densities.
    """

    lambda_eq_1: float
    lambda_eq_2: float
    lambda_eq_1_loaded: float
    lambda_eq_2_loaded: float


def _power_weight(cfg: NetworkConfig) -> float:
    """(P2/P1)^(2/alpha), the factor converting small-cell density into
    macro-equivalent density."""
    return cfg.power_ratio_small_to_macro ** (2.0 / cfg.path_loss_exponent)


def association_probs_uniform(cfg: NetworkConfig) -> tuple[float, float]:
    """Probability of the typical user attaching to the macro / small tier."""
    w = _power_weight(cfg)
    q1 = cfg.lambda_macro / (cfg.lambda_macro + cfg.lambda_small_nominal * w)
    return q1, 1.0 - q1


def loaded_densities_uniform(cfg: NetworkConfig) -> tuple[float, float]:
    """Densities of BSs with at least one associated user, per tier."""
    w = _power_weight(cfg)
    lam1, lam2 = cfg.lambda_macro, cfg.lambda_small_nominal
    lam1_eq = lam1 + lam2 * w
    loaded1 = lam1 * (1.0 - prob_unloaded(cfg.lambda_users, lam1_eq))
    if lam2 == 0.0:
        return loaded1, 0.0
    lam2_eq = lam1 / w + lam2
    loaded2 = lam2 * (1.0 - prob_unloaded(cfg.lambda_users, lam2_eq))
    return loaded1, loaded2


def equivalent_densities(cfg: NetworkConfig) -> UniformEquivalentDensities:
    w = _power_weight(cfg)
    lam1, lam2 = cfg.lambda_macro, cfg.lambda_small_nominal
    lp1, lp2 = loaded_densities_uniform(cfg)
    return UniformEquivalentDensities(
        lambda_eq_1=lam1 + lam2 * w,
        lambda_eq_2=lam1 / w + lam2,
        lambda_eq_1_loaded=lp1 + lp2 * w,
        lambda_eq_2_loaded=lp1 / w + lp2,
    )


def coverage_uniform_tier(cfg: NetworkConfig, tier: int, threshold: float) -> float:
    """P[SINR > threshold] given the typical user is served by ``tier``.

    ``threshold`` is linear.  Integrates the serving-distance average of the
    fading/interference Laplace transforms over [0, inf).
    """
    if threshold <= 0.0:
        raise ValueError("threshold must be positive (linear scale)")
    if tier not in (1, 2):
        raise ValueError("tier must be 1 or 2")
    if tier == 2 and cfg.lambda_small_nominal == 0.0:
        raise ValueError("tier 2 undefined without small cells")
    eq = equivalent_densities(cfg)
    if tier == 1:
        lam_eq, lam_eq_loaded, p_serv = eq.lambda_eq_1, eq.lambda_eq_1_loaded, cfg.p1
    else:
        lam_eq, lam_eq_loaded, p_serv = eq.lambda_eq_2, eq.lambda_eq_2_loaded, cfg.p2
    alpha = cfg.path_loss_exponent
    r = rho(threshold, alpha)
    decay = math.pi * (lam_eq + r * lam_eq_loaded)
    noise_coef = threshold * cfg.noise_w / p_serv

    def integrand(x: float) -> float:
        return 2.0 * math.pi * lam_eq * x * math.exp(-noise_coef * x ** alpha - decay * x * x)

    value, _ = integrate(integrand, 0.0, math.inf, gaussian_rate=decay)
    return value


def coverage_uniform(cfg: NetworkConfig, threshold: float) -> float:
    """Association-weighted coverage probability across both tiers."""
    q1, q2 = association_probs_uniform(cfg)
    total = q1 * coverage_uniform_tier(cfg, 1, threshold)
    if q2 > 0.0:
        total += q2 * coverage_uniform_tier(cfg, 2, threshold)
    return total


def throughput_ccdf_uniform_tier(
    cfg: NetworkConfig,
    tier: int,
    rate: float,
    series: SeriesSettings = DEFAULT_SERIES,
) -> float:
    """P[rate share > rate] for a user of ``tier``, averaging over the
    number of cell mates."""
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    eq = equivalent_densities(cfg)
    lam_eq = eq.lambda_eq_1 if tier == 1 else eq.lambda_eq_2

    def term(n: int) -> float:
        p = pmf_users_sharing_cell(n, cfg.lambda_users, lam_eq)
        if p == 0.0:
            return 0.0
        t_n = 2.0 ** ((n + 1) * rate / cfg.bandwidth_hz) - 1.0
        return p * coverage_uniform_tier(cfg, tier, t_n)

    return sum_series(term, series).value


def throughput_ccdf_uniform(
    cfg: NetworkConfig,
    rate: float,
    series: SeriesSettings = DEFAULT_SERIES,
) -> float:
    """Association-weighted single-user throughput CCDF across both tiers."""
    q1, q2 = association_probs_uniform(cfg)
    total = q1 * throughput_ccdf_uniform_tier(cfg, 1, rate, series)
    if q2 > 0.0:
        total += q2 * throughput_ccdf_uniform_tier(cfg, 2, rate, series)
    return total
