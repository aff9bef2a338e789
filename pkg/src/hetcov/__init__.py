"""Coverage and throughput analysis for two-tier cellular networks with an
exclusion-zone small-cell deployment, paired with a Monte Carlo validator."""

from .config import (
    CcdfCurve,
    DerivedDensities,
    EffectiveScenarioDensity,
    Method,
    NetworkConfig,
    Scenario,
    effective_small_density,
    region_probabilities,
)
from .montecarlo import (
    NetworkRealization,
    RegionCurves,
    SimSettings,
    associate_and_load,
    estimate_coverage_ccdf,
    estimate_throughput_ccdf,
    sample_realization,
    sample_sinr,
)
from .nonuniform import (
    DistanceRegion,
    NonUniformModel,
    ServingDistancePdf,
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
from .quadrature import (
    QuadratureError,
    QuadratureSettings,
    SeriesSettings,
    integrate,
    sum_series,
)
from .specfun import (
    CellAreaModel,
    pmf_users_random_cell,
    pmf_users_sharing_cell,
    prob_unloaded,
    rho,
)
from .uniform import (
    UniformEquivalentDensities,
    association_probs_uniform,
    coverage_uniform,
    coverage_uniform_tier,
    loaded_densities_uniform,
    throughput_ccdf_uniform,
    throughput_ccdf_uniform_tier,
)

__version__ = "0.1.0"
