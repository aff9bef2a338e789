"""Network configuration, unit conversions and shared result types.

All computation elsewhere in the package is done in SI units (meters,
watts, points per square meter).  dBm/dB/km only appear here, at the
configuration boundary, and in CLI output formatting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class Scenario(str, Enum):
    """Deployment scheme for the small-cell tier."""

    MACRO_ONLY = "MacroOnly"          # no small cells at all
    UNIFORM = "Uniform"               # homogeneous PPP over the whole plane
    NON_UNIFORM_I = "NonUniformI"     # small cells switched off inside the exclusion disks
    NON_UNIFORM_II = "NonUniformII"   # outer density boosted so the plane average stays fixed


class Method(str, Enum):
    ANALYTIC = "Analytic"
    MONTE_CARLO = "MonteCarlo"


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0.0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(p_w) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0.0:
        raise ValueError("value must be positive to express in dB")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and deployment parameters of the two-tier downlink network.

    Defaults reproduce the reference evaluation setup: 46/20 dBm transmit
    powers, path-loss exponent 4 with -34 dB at 1 m, macro density 1/km^2,
    user density 10/km^2, -104 dBm noise and 1 Hz bandwidth.
    """

    p_tx_macro: float = 46.0            # dBm
    p_tx_small: float = 20.0            # dBm
    path_loss_exponent: float = 4.0     # alpha, must be > 2
    path_loss_const_db: float = -34.0   # L0 at 1 m reference, dB
    lambda_macro: float = 1e-6          # macro BSs per m^2
    lambda_small_nominal: float = 1e-5  # small-cell density parameter, per m^2
    lambda_users: float = 1e-5          # users per m^2
    noise_power_dbm: float = -104.0     # sigma^2, dBm
    bandwidth_hz: float = 1.0           # W, Hz
    inner_radius_m: float = 500.0       # D >= 0, exclusion radius around macro sites
    scenario: Scenario = Scenario.UNIFORM

    def __post_init__(self):
        if self.path_loss_exponent <= 2.0:
            raise ValueError("path_loss_exponent must exceed 2 (interference integrals diverge)")
        if self.lambda_macro <= 0.0:
            raise ValueError("lambda_macro must be positive")
        if self.lambda_users <= 0.0:
            raise ValueError("lambda_users must be positive")
        if self.bandwidth_hz <= 0.0:
            raise ValueError("bandwidth_hz must be positive")
        if self.inner_radius_m < 0.0:
            raise ValueError("inner_radius_m must be nonnegative")
        if self.scenario is Scenario.MACRO_ONLY:
            if self.lambda_small_nominal != 0.0:
                raise ValueError("MacroOnly requires lambda_small_nominal == 0")
        elif self.lambda_small_nominal <= 0.0:
            raise ValueError(f"{self.scenario.value} requires lambda_small_nominal > 0")

    # Received-power coefficients P_i = P_tx,i * L0, in watts at 1 m.
    @property
    def p1(self) -> float:
        return dbm_to_watts(self.p_tx_macro) * db_to_linear(self.path_loss_const_db)

    @property
    def p2(self) -> float:
        return dbm_to_watts(self.p_tx_small) * db_to_linear(self.path_loss_const_db)

    @property
    def noise_w(self) -> float:
        return dbm_to_watts(self.noise_power_dbm)

    @property
    def power_ratio_small_to_macro(self) -> float:
        """(P2/P1), independent of the shared path-loss constant."""
        return dbm_to_watts(self.p_tx_small) / dbm_to_watts(self.p_tx_macro)


@dataclass(frozen=True)
class DerivedDensities:
    """Association probabilities and loaded-BS densities for the hole deployment.

    ``lambda_loaded_small`` is a density over the small-cell deployment region
    (the outer region); ``lambda_loaded_macro`` is a whole-plane density.
    """

    q1: float                   # P[typical user served by macro tier]
    q2_outer: float             # P[served by small tier | user in outer region]
    lambda_loaded_macro: float  # per m^2
    lambda_loaded_small: float  # per m^2


@dataclass(frozen=True)
class EffectiveScenarioDensity:
    """Small-cell density bookkeeping for a deployment scheme."""

    small_density_in_outer: float    # density where small cells are actually placed
    mean_density_whole_plane: float  # plane-average density


@dataclass(frozen=True)
class CcdfCurve:
    """A CCDF sampled on a threshold grid, with provenance.

    ``thresholds`` are in dB for SINR curves and bps for rate curves.
    ``ci_low``/``ci_high`` are Wilson 95% bounds, present for Monte Carlo
    curves only.
    """

    thresholds: np.ndarray
    values: np.ndarray
    method: Method
    scenario: Scenario
    region: str = "overall"     # "overall" | "inner" | "outer"
    ci_low: Optional[np.ndarray] = None
    ci_high: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "thresholds", np.asarray(self.thresholds, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.thresholds.shape != self.values.shape:
            raise ValueError("thresholds and values must have the same length")

    @property
    def label(self) -> str:
        if self.region == "overall":
            return self.scenario.value
        return f"{self.scenario.value}:{self.region}"


def region_probabilities(cfg: NetworkConfig) -> tuple[float, float]:
    """Probability of the typical user falling inside / outside the exclusion disks.

    The outer probability is the void probability of the macro PPP on a disk
    of radius D; the pair sums to 1 exactly.
    """
    p_outer = math.exp(-math.pi * cfg.lambda_macro * cfg.inner_radius_m ** 2)
    return 1.0 - p_outer, p_outer


def effective_small_density(cfg: NetworkConfig) -> EffectiveScenarioDensity:
    """Small-cell density placed in the outer region, and its plane average.

    Scheme I keeps the nominal density in the outer region (plane average
    shrinks by the outer-region probability); scheme II inflates the outer
    density so the plane average equals the nominal value.
    """
    lam2 = cfg.lambda_small_nominal
    if cfg.scenario is Scenario.MACRO_ONLY:
        return EffectiveScenarioDensity(0.0, 0.0)
    if cfg.scenario is Scenario.UNIFORM:
        return EffectiveScenarioDensity(lam2, lam2)
    _, p_outer = region_probabilities(cfg)
    if cfg.scenario is Scenario.NON_UNIFORM_I:
        return EffectiveScenarioDensity(lam2, lam2 * p_outer)
    if cfg.scenario is Scenario.NON_UNIFORM_II:
        return EffectiveScenarioDensity(lam2 / p_outer, lam2)
    raise ValueError(f"unknown scenario {cfg.scenario!r}")
