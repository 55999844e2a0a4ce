"""dominance_lab: indices and tests for approximate stochastic dominance.

Quantifies how far two univariate distributions are from the stochastic
order F <= G via two indices in [0, 1], the contamination index
sup(G - F) and the crossing-mass index (the measure of quantile levels
where F's quantile exceeds G's), and provides bootstrap-calibrated tests,
upper confidence bounds, closed forms for the normal model, and a Monte
Carlo harness for power studies.
"""
from ._backend import ENV_BACKEND, active_backend
from .bootstrap import BootstrapResult, boot_stat, resample, resample_parametric_normal
from .distributions import (
    STD_NORMAL,
    ContinuousModel,
    EmpiricalDistribution,
    LocationScale,
    RngStream,
    StandardNormal,
    empirical_from,
    ls_eval,
    normal_model,
    sample_normal,
    std_normal_cdf,
    std_normal_density,
    std_normal_quantile,
)
from .errors import DataError, DominanceError, DomainError, SingularityError
from .indices import (
    DominanceIndices,
    PsiCurve,
    gamma_empirical,
    gamma_hat_stat,
    gamma_normal,
    gamma_population_oracle,
    normal_indices,
    pi_empirical,
    pi_normal,
    pi_population_oracle,
    quantile_crossing_measure,
)
from .inference import (
    TestReport,
    TestSpec,
    gamma_asymptotic_sd,
    least_favorable_sd,
    plugin_gamma_stat,
    plugin_pi_stat,
    run_test,
    test_gamma,
    test_pi_bootstrap,
    test_pi_least_favorable,
    test_plugin_normal,
)
from .simulation import (
    CellRow,
    ContourGrid,
    SimulationCell,
    calibrated_mean,
    contour_grid,
    limit_law_sample,
    run_cell,
    run_table,
)

__version__ = "0.1.0"

__all__ = [
    "ENV_BACKEND",
    "active_backend",
    "BootstrapResult",
    "boot_stat",
    "resample",
    "resample_parametric_normal",
    "ContinuousModel",
    "StandardNormal",
    "STD_NORMAL",
    "LocationScale",
    "EmpiricalDistribution",
    "RngStream",
    "empirical_from",
    "ls_eval",
    "normal_model",
    "sample_normal",
    "std_normal_cdf",
    "std_normal_density",
    "std_normal_quantile",
    "DominanceError",
    "DomainError",
    "DataError",
    "SingularityError",
    "DominanceIndices",
    "PsiCurve",
    "pi_empirical",
    "gamma_empirical",
    "gamma_hat_stat",
    "quantile_crossing_measure",
    "pi_normal",
    "gamma_normal",
    "normal_indices",
    "pi_population_oracle",
    "gamma_population_oracle",
    "TestSpec",
    "TestReport",
    "least_favorable_sd",
    "test_pi_least_favorable",
    "test_pi_bootstrap",
    "test_gamma",
    "test_plugin_normal",
    "run_test",
    "gamma_asymptotic_sd",
    "plugin_pi_stat",
    "plugin_gamma_stat",
    "SimulationCell",
    "CellRow",
    "ContourGrid",
    "run_cell",
    "run_table",
    "calibrated_mean",
    "contour_grid",
    "limit_law_sample",
    "__version__",
]
