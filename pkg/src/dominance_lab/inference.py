"""Tests and upper confidence bounds for approximate stochastic dominance.

Every procedure targets a one-sided null of the form
``H0: index(F, G) >= delta0`` and rejects when the standardized statistic
``sqrt(nm/(n+m)) * (estimate - delta0)`` falls below ``sigma * Phi^{-1}(alpha)``.
Equivalently, the reported upper confidence bound
``estimate - sqrt((n+m)/nm) * sigma * Phi^{-1}(alpha)`` lies below delta0.

Four flavors share that skeleton:

* contamination index, conservative: the least-favorable standard deviation
  ``sqrt(1/4 - delta0^2 lambda (1 - lambda))`` needs no resampling;
* contamination index, bootstrap: bias-corrected estimate and bootstrap
  standard error;
* crossing-mass index, bootstrap: raw single-crossing estimate (the index's
  own sampling theory provides no bias correction) and bootstrap standard
  error, flagged when the sample variances nearly coincide since the
  asymptotic variance blows up at equal scales;
* parametric plug-in: closed-form index at fitted normal parameters with a
  parametric bootstrap.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bootstrap import boot_stat, register_row_stat
from .distributions import (
    ContinuousModel,
    EmpiricalDistribution,
    std_normal_quantile,
)
from .errors import DataError, DomainError, SingularityError
from .indices import (
    _canonical_pair,
    _gamma_canonical,
    _pi_canonical,
    gamma_empirical,
    gamma_hat_stat,
    gamma_normal,
    pi_empirical,
    pi_normal,
)

__all__ = [
    "TestSpec",
    "TestReport",
    "SIGMA_FLOOR",
    "least_favorable_sd",
    "test_pi_least_favorable",
    "test_pi_bootstrap",
    "test_gamma",
    "test_plugin_normal",
    "run_test",
    "gamma_asymptotic_sd",
    "plugin_pi_stat",
    "plugin_gamma_stat",
]

INDEX_KINDS = ("pi", "gamma")
METHODS = ("least-favorable", "bootstrap", "plugin-normal")

# keeps the rejection rule well defined when bootstrap replicates collapse
SIGMA_FLOOR = 1e-6

# sample variances (ML) within 5 percent flag the near-singular regime of the
# crossing-mass test; the plug-in version warns at 1e-3 relative scale gap
NEAR_EQUAL_VARIANCE_REL = 0.05
PLUGIN_SCALE_GAP_REL = 1e-3


@dataclass(frozen=True)
class TestSpec:
    """Which index, which null boundary, which method, at which level."""

    index: str
    delta0: float
    alpha: float = 0.05
    method: str = "bootstrap"
    B: int = 200
    bias_correct_gamma: bool = False

    def __post_init__(self) -> None:
        if self.index not in INDEX_KINDS:
            raise DomainError(f"index must be one of {INDEX_KINDS}, got {self.index!r}")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.index == "gamma" and self.method == "least-favorable":
            raise DomainError("the least-favorable test exists only for the pi index")
        if not 0.0 < self.delta0 < 1.0:
            raise DomainError(f"delta0 must lie in (0, 1), got {self.delta0}")
        if not 0.0 < self.alpha < 0.5:
            raise DomainError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if self.B < 50:
            raise DomainError(f"need at least 50 bootstrap replicates, got {self.B}")


@dataclass(frozen=True)
class TestReport:
    """Everything one rejection decision is made of."""

    index: str
    method: str
    delta0: float
    alpha: float
    n: int
    m: int
    lambda_nm: float
    estimate_raw: float
    estimate_used: float
    sigma_used: float
    statistic: float
    critical: float
    reject: bool
    upper_bound: float
    degeneracy_flag: bool


def _validated_sizes(x: EmpiricalDistribution, y: EmpiricalDistribution) -> tuple[int, int]:
    if x.n < 1 or y.n < 1:
        raise DataError("both samples must be nonempty")
    return x.n, y.n


def _assemble(
    spec: TestSpec,
    n: int,
    m: int,
    estimate_raw: float,
    estimate_used: float,
    sigma_used: float,
    degeneracy_flag: bool,
) -> TestReport:
    scale = math.sqrt(n * m / (n + m))
    quantile_alpha = std_normal_quantile(spec.alpha)
    statistic = scale * (estimate_used - spec.delta0)
    critical = sigma_used * quantile_alpha
    upper_bound = min(1.0, estimate_used - sigma_used * quantile_alpha / scale)
    return TestReport(
        index=spec.index,
        method=spec.method,
        delta0=spec.delta0,
        alpha=spec.alpha,
        n=n,
        m=m,
        lambda_nm=n / (n + m),
        estimate_raw=estimate_raw,
        estimate_used=estimate_used,
        sigma_used=sigma_used,
        statistic=statistic,
        critical=critical,
        reject=bool(statistic < critical),
        upper_bound=upper_bound,
        degeneracy_flag=degeneracy_flag,
    )


def least_favorable_sd(pi0: float, lambda_nm: float) -> float:
    """sqrt(1/4 - pi0^2 * lambda * (1 - lambda)), the worst-case limit scale."""
    if not 0.0 < pi0 < 1.0:
        raise DomainError(f"pi0 must lie in (0, 1), got {pi0}")
    if not 0.0 < lambda_nm < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lambda_nm}")
    return math.sqrt(0.25 - pi0 * pi0 * lambda_nm * (1.0 - lambda_nm))


def test_pi_least_favorable(
    x: EmpiricalDistribution, y: EmpiricalDistribution, spec: TestSpec
) -> TestReport:
    """Conservative contamination-index test: no resampling, uniform level."""
    if spec.index != "pi" or spec.method != "least-favorable":
        raise DomainError("spec must request index='pi', method='least-favorable'")
    n, m = _validated_sizes(x, y)
    estimate = pi_empirical(x, y)
    sigma = least_favorable_sd(spec.delta0, n / (n + m))
    return _assemble(spec, n, m, estimate, estimate, sigma, False)


def test_pi_bootstrap(
    rng, x: EmpiricalDistribution, y: EmpiricalDistribution, spec: TestSpec
) -> TestReport:
    """Bias-corrected contamination-index test with bootstrap standard error."""
    if spec.index != "pi" or spec.method != "bootstrap":
        raise DomainError("spec must request index='pi', method='bootstrap'")
    n, m = _validated_sizes(x, y)
    boot = boot_stat(rng, x, y, pi_empirical, B=spec.B, scheme="nonparametric")
    sigma = max(boot.boot_se, SIGMA_FLOOR)
    return _assemble(spec, n, m, boot.raw_estimate, boot.bias_corrected, sigma, False)


def test_gamma(
    rng, x: EmpiricalDistribution, y: EmpiricalDistribution, spec: TestSpec
) -> TestReport:
    """Crossing-mass test from the single-crossing estimator.

    Uses the raw estimate by default (set ``spec.bias_correct_gamma`` for the
    corrected variant) and a bootstrap standard error.  The degeneracy flag
    marks nearly equal sample variances, where the estimator's asymptotic
    variance explodes and the decision should not be trusted.
    """
    if spec.index != "gamma" or spec.method != "bootstrap":
        raise DomainError("spec must request index='gamma', method='bootstrap'")
    n, m = _validated_sizes(x, y)
    curve = gamma_empirical(x, y)
    boot = boot_stat(rng, x, y, gamma_hat_stat, B=spec.B, scheme="nonparametric")
    estimate_used = boot.bias_corrected if spec.bias_correct_gamma else curve.gamma_hat
    sigma = max(boot.boot_se, SIGMA_FLOOR)
    var_x = x.sd_ml**2
    var_y = y.sd_ml**2
    near_equal = abs(var_x - var_y) <= NEAR_EQUAL_VARIANCE_REL * max(var_x, var_y)
    return _assemble(
        spec, n, m, curve.gamma_hat, estimate_used, sigma, near_equal or curve.degenerate
    )


def plugin_pi_stat(x: EmpiricalDistribution, y: EmpiricalDistribution) -> float:
    """Contamination index at the fitted normal parameters (ML, divisor n)."""
    if x.sd_ml == 0.0 or y.sd_ml == 0.0:
        raise DataError("plug-in estimation needs nondegenerate samples")
    return pi_normal(x.mean, x.sd_ml, y.mean, y.sd_ml)


def plugin_gamma_stat(x: EmpiricalDistribution, y: EmpiricalDistribution) -> float:
    """Crossing-mass index at the fitted normal parameters (ML, divisor n)."""
    if x.sd_ml == 0.0 or y.sd_ml == 0.0:
        raise DataError("plug-in estimation needs nondegenerate samples")
    return gamma_normal(x.mean, x.sd_ml, y.mean, y.sd_ml)


def _plugin_rows(canonical_fn):
    def rows(x_rows: np.ndarray, y_rows: np.ndarray) -> np.ndarray:
        mx = x_rows.mean(axis=1)
        sx = x_rows.std(axis=1)
        my = y_rows.mean(axis=1)
        sy = y_rows.std(axis=1)
        return canonical_fn((my - mx) / sx, sy / sx)

    return rows


register_row_stat(plugin_pi_stat, _plugin_rows(_pi_canonical))
register_row_stat(plugin_gamma_stat, _plugin_rows(_gamma_canonical))


def test_plugin_normal(
    rng, x: EmpiricalDistribution, y: EmpiricalDistribution, spec: TestSpec
) -> TestReport:
    """Parametric plug-in test with a parametric-normal bootstrap.

    Mirrors the nonparametric conventions: the contamination index is
    bias-corrected, the crossing-mass index is not (unless requested).  For
    the crossing-mass index with nearly equal fitted scales the asymptotic
    normality of the plug-in estimator fails; a warning is emitted and the
    report is flagged.
    """
    if spec.method != "plugin-normal":
        raise DomainError("spec must request method='plugin-normal'")
    n, m = _validated_sizes(x, y)
    if x.sd_ml == 0.0 or y.sd_ml == 0.0:
        raise DataError("plug-in test needs nondegenerate samples")
    flagged = False
    if spec.index == "pi":
        stat = plugin_pi_stat
    else:
        stat = plugin_gamma_stat
        if abs(x.sd_ml - y.sd_ml) / x.sd_ml < PLUGIN_SCALE_GAP_REL:
            warnings.warn(
                "fitted scales nearly equal: the plug-in crossing-mass estimator "
                "is unstable here",
                RuntimeWarning,
                stacklevel=2,
            )
            flagged = True
    boot = boot_stat(rng, x, y, stat, B=spec.B, scheme="parametric-normal")
    if spec.index == "pi" or spec.bias_correct_gamma:
        estimate_used = boot.bias_corrected
    else:
        estimate_used = boot.raw_estimate
    sigma = max(boot.boot_se, SIGMA_FLOOR)
    return _assemble(spec, n, m, boot.raw_estimate, estimate_used, sigma, flagged)


def run_test(
    rng, x: EmpiricalDistribution, y: EmpiricalDistribution, spec: TestSpec
) -> TestReport:
    """Dispatch to the procedure selected by ``spec``."""
    if spec.method == "least-favorable":
        return test_pi_least_favorable(x, y, spec)
    if spec.method == "plugin-normal":
        return test_plugin_normal(rng, x, y, spec)
    if spec.index == "pi":
        return test_pi_bootstrap(rng, x, y, spec)
    return test_gamma(rng, x, y, spec)


def gamma_asymptotic_sd(
    f: ContinuousModel,
    g: ContinuousModel,
    crossing_x: float,
    gamma_star: float,
    lam: float,
) -> float:
    """Analytic limit standard deviation of the crossing-mass estimator.

    sqrt(gamma* (1 - gamma*) [(1 - lambda) g(x*)^2 + lambda f(x*)^2]) over
    |g(x*) - f(x*)|, where x* is the single crossing point of the two
    distribution functions.

    Raises
    ------
    SingularityError
        When the densities coincide at the crossing point (the limit
        variance is infinite there).
    """
    if not 0.0 <= gamma_star <= 1.0:
        raise DomainError(f"gamma_star must lie in [0, 1], got {gamma_star}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    f_x = float(f.density(crossing_x))
    g_x = float(g.density(crossing_x))
    denom = g_x - f_x
    if not math.isfinite(denom) or abs(denom) <= 1e-12 * max(abs(f_x), abs(g_x), 1e-300):
        raise SingularityError(
            f"densities coincide at the crossing point x*={crossing_x}: "
            "the estimator has no finite asymptotic variance"
        )
    variance = (
        gamma_star * (1.0 - gamma_star) * ((1.0 - lam) * g_x**2 + lam * f_x**2)
    ) / denom**2
    return math.sqrt(variance)
