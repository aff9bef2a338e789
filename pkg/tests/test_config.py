import math

import numpy as np
import pytest

from hetcov.config import (
    CcdfCurve,
    Method,
    NetworkConfig,
    Scenario,
    dbm_to_watts,
    db_to_linear,
    effective_small_density,
    linear_to_db,
    region_probabilities,
    watts_to_dbm,
)


@pytest.mark.parametrize("p_dbm", [-104.0, -34.0, 0.0, 20.0, 46.0, 73.5])
def test_dbm_round_trip(p_dbm):
    assert watts_to_dbm(dbm_to_watts(p_dbm)) == pytest.approx(p_dbm, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x_db", [-34.0, -1.0, 0.0, 3.0, 26.0])
def test_db_round_trip(x_db):
    assert linear_to_db(db_to_linear(x_db)) == pytest.approx(x_db, rel=1e-12, abs=1e-12)


def test_received_power_coefficients(cfg_uniform):
    # 46 dBm through -34 dB path loss at 1 m, and 20 dBm likewise
    assert cfg_uniform.p1 == pytest.approx(10 ** -1.8, rel=1e-12)
    assert cfg_uniform.p2 == pytest.approx(10 ** -4.4, rel=1e-12)
    assert cfg_uniform.power_ratio_small_to_macro == pytest.approx(10 ** -2.6, rel=1e-12)
    assert cfg_uniform.noise_w == pytest.approx(10 ** -13.4, rel=1e-12)


@pytest.mark.parametrize("bad", [
    dict(path_loss_exponent=2.0),
    dict(path_loss_exponent=1.5),
    dict(lambda_macro=0.0),
    dict(lambda_users=-1e-6),
    dict(bandwidth_hz=0.0),
    dict(inner_radius_m=-1.0),
    dict(scenario=Scenario.MACRO_ONLY, lambda_small_nominal=1e-5),
    dict(scenario=Scenario.UNIFORM, lambda_small_nominal=0.0),
    dict(scenario=Scenario.NON_UNIFORM_I, lambda_small_nominal=0.0),
])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        NetworkConfig(**bad)


def test_region_probabilities_empty_inner():
    cfg = NetworkConfig(inner_radius_m=0.0)
    assert region_probabilities(cfg) == (0.0, 1.0)


def test_region_probabilities_reference_values():
    p_inner, _ = region_probabilities(NetworkConfig(inner_radius_m=500.0))
    assert p_inner == pytest.approx(0.5441, abs=1e-4)
    p_inner, _ = region_probabilities(NetworkConfig(inner_radius_m=1000.0))
    assert p_inner == pytest.approx(1.0 - math.exp(-math.pi), rel=1e-12)


@pytest.mark.parametrize("lam1", [1e-7, 1e-6, 5e-6])
def test_region_probabilities_sum_exactly_one(lam1):
    for d in np.linspace(0.0, 3000.0, 40):
        p_inner, p_outer = region_probabilities(
            NetworkConfig(lambda_macro=lam1, inner_radius_m=float(d)))
        assert p_inner + p_outer == 1.0  # exact by construction


def test_region_probability_monotone_in_d_and_density():
    inner = [region_probabilities(NetworkConfig(inner_radius_m=float(d)))[0]
             for d in np.linspace(0.0, 2000.0, 30)]
    assert np.all(np.diff(inner) > 0.0)
    inner = [region_probabilities(NetworkConfig(lambda_macro=lam, inner_radius_m=500.0))[0]
             for lam in np.logspace(-7, -5, 20)]
    assert np.all(np.diff(inner) > 0.0)


def test_effective_density_uniform_identity():
    eff = effective_small_density(NetworkConfig(scenario=Scenario.UNIFORM))
    assert eff.small_density_in_outer == 1e-5
    assert eff.mean_density_whole_plane == 1e-5


def test_effective_density_scheme_one():
    eff = effective_small_density(NetworkConfig(scenario=Scenario.NON_UNIFORM_I))
    assert eff.small_density_in_outer == 1e-5
    # thinned plane average: exp(-pi/4) of the nominal density
    assert eff.mean_density_whole_plane == pytest.approx(1e-5 * math.exp(-math.pi / 4.0), rel=1e-12)
    assert eff.mean_density_whole_plane == pytest.approx(4.559e-6, rel=1e-3)


def test_effective_density_scheme_two():
    eff = effective_small_density(NetworkConfig(scenario=Scenario.NON_UNIFORM_II))
    assert eff.small_density_in_outer == pytest.approx(2.1934e-5, rel=1e-4)
    assert eff.mean_density_whole_plane == pytest.approx(1e-5, rel=1e-12)


def test_effective_density_macro_only(cfg_macro):
    eff = effective_small_density(cfg_macro)
    assert eff.small_density_in_outer == 0.0
    assert eff.mean_density_whole_plane == 0.0


@pytest.mark.parametrize("lam1,lam2,d", [
    (1e-6, 1e-5, 250.0), (2e-6, 5e-6, 700.0), (5e-7, 2e-5, 1200.0),
])
def test_scheme_two_plane_mean_matches_uniform(lam1, lam2, d):
    cfg2 = NetworkConfig(scenario=Scenario.NON_UNIFORM_II, lambda_macro=lam1,
                         lambda_small_nominal=lam2, inner_radius_m=d)
    cfg_u = NetworkConfig(scenario=Scenario.UNIFORM, lambda_macro=lam1,
                          lambda_small_nominal=lam2, inner_radius_m=d)
    assert effective_small_density(cfg2).mean_density_whole_plane == pytest.approx(
        effective_small_density(cfg_u).mean_density_whole_plane, rel=1e-12)


def test_ccdf_curve_shape_validation():
    with pytest.raises(ValueError):
        CcdfCurve(thresholds=np.arange(3.0), values=np.arange(4.0),
                  method=Method.ANALYTIC, scenario=Scenario.UNIFORM)


def test_ccdf_curve_label():
    curve = CcdfCurve(thresholds=np.arange(3.0), values=np.zeros(3),
                      method=Method.MONTE_CARLO, scenario=Scenario.NON_UNIFORM_I,
                      region="inner")
    assert curve.label == "NonUniformI:inner"
