import math
from dataclasses import replace

import numpy as np
import pytest

from hetcov.config import NetworkConfig, Scenario, region_probabilities
from hetcov.nonuniform import (
    DistanceRegion,
    build_nonuniform_model,
    coverage_inner,
    coverage_outer,
    coverage_outer_tier1,
    coverage_outer_tier2,
    coverage_overall,
    derive_densities,
    serving_distance_pdf,
    throughput_ccdf_inner,
    throughput_ccdf_outer,
    throughput_ccdf_overall,
)
from hetcov.quadrature import integrate
from hetcov.uniform import (
    association_probs_uniform,
    coverage_uniform,
    coverage_uniform_tier,
    loaded_densities_uniform,
    throughput_ccdf_uniform,
)

from conftest import assert_nonincreasing

NOISELESS = float("-inf")
T_MINUS_5_DB = 10.0 ** -0.5


def test_derive_densities_reduces_to_uniform_at_zero_radius():
    cfg = NetworkConfig(scenario=Scenario.NON_UNIFORM_I, inner_radius_m=0.0)
    uni = replace(cfg, scenario=Scenario.UNIFORM)
    derived = derive_densities(cfg)
    q1_u, q2_u = association_probs_uniform(uni)
    lp1_u, lp2_u = loaded_densities_uniform(uni)
    assert derived.q1 == pytest.approx(q1_u, rel=1e-12)
    assert derived.q2_outer == pytest.approx(q2_u, rel=1e-12)
    assert derived.lambda_loaded_macro == pytest.approx(lp1_u, rel=1e-9)
    assert derived.lambda_loaded_small == pytest.approx(lp2_u, rel=1e-9)


def test_derive_densities_reference_parameters(cfg_scen1):
    derived = derive_densities(cfg_scen1)
    assert derived.q1 == pytest.approx(0.749, abs=1e-3)
    assert 0.0 <= derived.q2_outer <= 1.0
    assert 0.0 <= derived.lambda_loaded_macro <= cfg_scen1.lambda_macro
    assert 0.0 <= derived.lambda_loaded_small <= cfg_scen1.lambda_small_nominal


def test_derive_densities_wide_exclusion_limit():
    cfg = NetworkConfig(scenario=Scenario.NON_UNIFORM_I, inner_radius_m=1e5)
    derived = derive_densities(cfg)
    assert derived.q1 == pytest.approx(1.0, abs=1e-9)
    assert derived.q2_outer == pytest.approx(1.0, abs=1e-9)


def test_derive_densities_macro_only_degenerate(cfg_macro):
    derived = derive_densities(cfg_macro)
    assert derived.q1 == 1.0
    assert derived.q2_outer == 0.0
    assert derived.lambda_loaded_small == 0.0


def test_derive_densities_rejects_uniform(cfg_uniform):
    with pytest.raises(ValueError):
        derive_densities(cfg_uniform)


def test_model_warns_when_macro_power_does_not_dominate(cfg_scen1):
    inverted = replace(cfg_scen1, p_tx_macro=20.0, p_tx_small=46.0)
    with pytest.warns(RuntimeWarning):
        build_nonuniform_model(inverted)


@pytest.mark.parametrize("region", list(DistanceRegion))
@pytest.mark.parametrize("scenario", [Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II])
def test_serving_distance_pdf_normalizes(region, scenario):
    model = build_nonuniform_model(NetworkConfig(scenario=scenario, inner_radius_m=500.0))
    pdf = serving_distance_pdf(model, region)
    lo, hi = pdf.support
    if math.isinf(hi):
        x_b = model.breakpoint_m
        rate = math.pi * min(model.cfg.lambda_macro, model.outer_small_density)
        first, _ = integrate(pdf.pdf, lo, x_b) if x_b > lo else (0.0, 0.0)
        second, _ = integrate(pdf.pdf, max(lo, x_b), math.inf, gaussian_rate=rate)
        total = first + second
    else:
        total, _ = integrate(pdf.pdf, lo, hi)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_serving_distance_cdf_matches_pdf(cfg_scen1):
    model = build_nonuniform_model(cfg_scen1)
    pdf = serving_distance_pdf(model, DistanceRegion.OUTER_TIER2)
    for x in (30.0, model.breakpoint_m, 200.0, 600.0):
        mass, _ = integrate(pdf.pdf, 0.0, x)
        assert pdf.cdf(x) == pytest.approx(mass, abs=1e-8)


def test_serving_distance_cdf_continuous_at_breakpoint(cfg_scen1):
    model = build_nonuniform_model(cfg_scen1)
    pdf = serving_distance_pdf(model, DistanceRegion.OUTER_TIER2)
    x_b = model.breakpoint_m
    eps = 1e-12 * x_b  # keep the interval's own probability mass below the tolerance
    assert pdf.cdf(x_b - eps) == pytest.approx(pdf.cdf(x_b + eps), abs=1e-10)


def test_serving_distance_pdf_jump_at_breakpoint(cfg_scen1):
    model = build_nonuniform_model(cfg_scen1)
    pdf = serving_distance_pdf(model, DistanceRegion.OUTER_TIER2)
    x_b = model.breakpoint_m
    lam1, lam2 = cfg_scen1.lambda_macro, model.outer_small_density
    w = model.power_weight
    below = pdf.pdf(x_b)
    above = pdf.pdf(np.nextafter(x_b, math.inf))
    expected_jump = model.constant_m * 2.0 * math.pi * lam2 * x_b * abs(
        math.exp(-math.pi * (lam1 / w + lam2) * x_b ** 2)
        / math.exp(-math.pi * lam1 * cfg_scen1.inner_radius_m ** 2)
        - math.exp(-math.pi * lam2 * x_b ** 2)
    )
    assert math.isfinite(above - below)
    assert abs(above - below) == pytest.approx(expected_jump, rel=1e-6)


def test_serving_distance_inner_mode(cfg_scen1):
    model = build_nonuniform_model(cfg_scen1)
    pdf = serving_distance_pdf(model, DistanceRegion.INNER)
    xs = np.linspace(1.0, 500.0, 2000)
    mode = xs[np.argmax([pdf.pdf(float(x)) for x in xs])]
    unconstrained = 1.0 / math.sqrt(2.0 * math.pi * cfg_scen1.lambda_macro)
    assert unconstrained == pytest.approx(398.94, abs=0.01)
    assert mode == pytest.approx(unconstrained, abs=1.0)


def test_serving_distance_inner_mode_clips_to_boundary():
    model = build_nonuniform_model(
        NetworkConfig(scenario=Scenario.NON_UNIFORM_I, inner_radius_m=300.0))
    pdf = serving_distance_pdf(model, DistanceRegion.INNER)
    xs = np.linspace(1.0, 300.0, 1500)
    mode = xs[np.argmax([pdf.pdf(float(x)) for x in xs])]
    assert mode == pytest.approx(300.0, abs=1.0)


def test_serving_distance_domain_errors(cfg_macro):
    no_inner = build_nonuniform_model(
        NetworkConfig(scenario=Scenario.NON_UNIFORM_I, inner_radius_m=0.0))
    with pytest.raises(ValueError):
        serving_distance_pdf(no_inner, DistanceRegion.INNER)
    macro_model = build_nonuniform_model(cfg_macro)
    with pytest.raises(ValueError):
        serving_distance_pdf(macro_model, DistanceRegion.OUTER_TIER2)


@pytest.mark.parametrize("scenario", [Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II])
def test_zero_radius_reductions_match_uniform(scenario):
    cfg = NetworkConfig(scenario=scenario, inner_radius_m=0.0)
    uni = replace(cfg, scenario=Scenario.UNIFORM)
    model = build_nonuniform_model(cfg)
    for t_db in (-7.0, 0.0, 12.0):
        t = 10.0 ** (t_db / 10.0)
        assert coverage_outer_tier1(model, t) == pytest.approx(
            coverage_uniform_tier(uni, 1, t), abs=1e-6)
        assert coverage_outer_tier2(model, t) == pytest.approx(
            coverage_uniform_tier(uni, 2, t), abs=1e-6)
        assert coverage_overall(model, t) == pytest.approx(
            coverage_uniform(uni, t), abs=1e-6)
    for rate in (0.01, 0.2):
        assert throughput_ccdf_overall(model, rate) == pytest.approx(
            throughput_ccdf_uniform(uni, rate), abs=1e-6)


def test_coverage_inner_requires_inner_region():
    model = build_nonuniform_model(
        NetworkConfig(scenario=Scenario.NON_UNIFORM_I, inner_radius_m=0.0))
    with pytest.raises(ValueError):
        coverage_inner(model, 1.0)


def test_coverage_threshold_limits(cfg_scen1):
    model = build_nonuniform_model(replace(cfg_scen1, noise_power_dbm=NOISELESS))
    assert coverage_inner(model, 1e-12) == pytest.approx(1.0, abs=1e-5)
    assert coverage_outer(model, 1e-12) == pytest.approx(1.0, abs=1e-5)
    assert coverage_outer_tier1(model, 1e12) == pytest.approx(0.0, abs=1e-5)
    assert coverage_outer_tier2(model, 1e12) == pytest.approx(0.0, abs=1e-5)


def test_coverage_outer_mixture_bounds(cfg_scen2):
    model = build_nonuniform_model(cfg_scen2)
    t = T_MINUS_5_DB
    t1 = coverage_outer_tier1(model, t)
    t2 = coverage_outer_tier2(model, t)
    mix = coverage_outer(model, t)
    assert min(t1, t2) - 1e-12 <= mix <= max(t1, t2) + 1e-12
    q2 = model.derived.q2_outer
    assert mix == pytest.approx((1.0 - q2) * t1 + q2 * t2, rel=1e-12)


def test_coverage_overall_mixture_identity(cfg_scen1):
    model = build_nonuniform_model(cfg_scen1)
    t = T_MINUS_5_DB
    p_inner, p_outer = region_probabilities(cfg_scen1)
    assert coverage_overall(model, t) == pytest.approx(
        p_inner * coverage_inner(model, t) + p_outer * coverage_outer(model, t),
        rel=1e-12)


def test_macro_only_regions_recombine_to_unconditional(cfg_macro):
    # single tier: the region split is exact, so the mixture must match the
    # unconditional coverage to quadrature accuracy
    model = build_nonuniform_model(cfg_macro)
    for t_db in (-5.0, 5.0):
        t = 10.0 ** (t_db / 10.0)
        assert coverage_overall(model, t) == pytest.approx(
            coverage_uniform(cfg_macro, t), abs=1e-8)


@pytest.mark.parametrize("scenario", [Scenario.NON_UNIFORM_I, Scenario.NON_UNIFORM_II])
def test_power_scale_invariance_noise_free(scenario):
    base = NetworkConfig(scenario=scenario, inner_radius_m=500.0,
                         noise_power_dbm=NOISELESS)
    shifted = replace(base, p_tx_macro=base.p_tx_macro + 9.2,
                      p_tx_small=base.p_tx_small + 9.2)
    m0, m1 = build_nonuniform_model(base), build_nonuniform_model(shifted)
    assert m1.derived.q1 == pytest.approx(m0.derived.q1, rel=1e-9)
    assert m1.derived.q2_outer == pytest.approx(m0.derived.q2_outer, rel=1e-9)
    for t in (0.1, 1.0, 10.0):
        assert coverage_inner(m1, t) == pytest.approx(coverage_inner(m0, t), rel=1e-9)
        assert coverage_outer(m1, t) == pytest.approx(coverage_outer(m0, t), rel=1e-9)


def test_coverage_monotone_over_threshold_grid(cfg_scen2):
    model = build_nonuniform_model(cfg_scen2)
    grid = [10.0 ** (t / 10.0) for t in np.linspace(-10.0, 20.0, 16)]
    for fn in (coverage_inner, coverage_outer_tier1, coverage_outer_tier2,
               coverage_outer, coverage_overall):
        values = [fn(model, t) for t in grid]
        assert all(-1e-9 <= v <= 1.0 + 1e-9 for v in values)
        assert_nonincreasing(values)


def test_throughput_limits_and_monotonicity(cfg_scen1):
    model = build_nonuniform_model(cfg_scen1)
    assert throughput_ccdf_overall(model, 1e-9) == pytest.approx(1.0, abs=1e-3)
    values = [throughput_ccdf_overall(model, r) for r in np.logspace(-3, 0.5, 8)]
    assert_nonincreasing(values)
    lonely = build_nonuniform_model(replace(cfg_scen1, lambda_users=1e-20))
    rate = 0.4
    t = 2.0 ** rate - 1.0
    assert throughput_ccdf_inner(lonely, rate) == pytest.approx(
        coverage_inner(lonely, t), rel=1e-9)
    assert throughput_ccdf_outer(lonely, rate) == pytest.approx(
        coverage_outer(lonely, t), rel=1e-9)


def test_reference_coverage_anchors():
    t = T_MINUS_5_DB
    scen2 = build_nonuniform_model(
        NetworkConfig(scenario=Scenario.NON_UNIFORM_II, inner_radius_m=600.0))
    assert 0.82 <= coverage_overall(scen2, t) <= 0.88
    assert 0.76 <= coverage_uniform(NetworkConfig(), t) <= 0.82
    macro = NetworkConfig(scenario=Scenario.MACRO_ONLY, lambda_small_nominal=0.0)
    assert 0.70 <= coverage_uniform(macro, t) <= 0.76
