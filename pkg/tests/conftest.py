import numpy as np
import pytest

from hetcov.config import NetworkConfig, Scenario


@pytest.fixture
def cfg_uniform() -> NetworkConfig:
    return NetworkConfig(scenario=Scenario.UNIFORM)


@pytest.fixture
def cfg_macro() -> NetworkConfig:
    return NetworkConfig(scenario=Scenario.MACRO_ONLY, lambda_small_nominal=0.0)


@pytest.fixture
def cfg_scen1() -> NetworkConfig:
    return NetworkConfig(scenario=Scenario.NON_UNIFORM_I, inner_radius_m=500.0)


@pytest.fixture
def cfg_scen2() -> NetworkConfig:
    return NetworkConfig(scenario=Scenario.NON_UNIFORM_II, inner_radius_m=500.0)


def assert_nonincreasing(values, tol: float = 1e-12) -> None:
    values = np.asarray(values, dtype=float)
    assert np.all(np.diff(values) <= tol), f"sequence not non-increasing: {values}"
