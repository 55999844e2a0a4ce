"""The two deviation indices from stochastic order.

For distribution functions F (first sample) and G (second sample):

* the contamination index is ``sup_x (G(x) - F(x))``: the smallest mixture
  fraction that must be allowed on each side before the remainders can be
  stochastically ordered;
* the crossing-mass index is the Lebesgue measure of the set of quantile
  levels where the F-quantile exceeds the G-quantile.

Both are 0 exactly when F is stochastically dominated by G, and the
contamination index never exceeds the crossing-mass index.

This module provides exact empirical estimators over step functions, closed
forms for normal pairs, and deliberately naive grid oracles used to
cross-check the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._backend import kernels
from ._grids import psi_grid
from .distributions import ContinuousModel, EmpiricalDistribution
from .errors import DomainError

__all__ = [
    "DominanceIndices",
    "PsiCurve",
    "TIE_TOL",
    "pi_empirical",
    "gamma_empirical",
    "gamma_hat_stat",
    "quantile_crossing_measure",
    "pi_normal",
    "gamma_normal",
    "normal_indices",
    "pi_population_oracle",
    "gamma_population_oracle",
]

# |psi| values within this absolute distance of the maximum count as tied;
# the smallest tied breakpoint wins.
TIE_TOL = 1e-12


@dataclass(frozen=True)
class DominanceIndices:
    """A consistent (contamination, crossing-mass) pair for one (F, G)."""

    pi: float
    gamma: float

    def __post_init__(self) -> None:
        ok = (
            -1e-9 <= self.pi
            and self.pi <= self.gamma + 1e-9
            and self.gamma <= 1.0 + 1e-9
        )
        if not ok:
            raise DomainError(
                f"indices must satisfy 0 <= pi <= gamma <= 1, got pi={self.pi}, gamma={self.gamma}"
            )


@dataclass(frozen=True)
class PsiCurve:
    """The piecewise-linear empirical psi curve and its argmax metadata.

    ``breakpoints`` holds 0 and the union of both samples' quantile jump
    levels (ending at 1); ``values`` holds psi at each breakpoint.  By
    construction ``values[0] == -values[-1]`` exactly.  ``gamma_star`` is the
    smallest breakpoint attaining max |psi| (ties within :data:`TIE_TOL`),
    and ``gamma_hat`` applies the sign rule: the level itself when psi at the
    argmax is nonnegative, its complement otherwise.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    gamma_star: float
    psi_at_star: float
    gamma_hat: float
    degenerate: bool


def pi_empirical(x: EmpiricalDistribution, y: EmpiricalDistribution) -> float:
    """Exact supremum of (ecdf of y) - (ecdf of x) over the whole line.

    The supremum of a difference of right-continuous step functions is
    attained on the finite set of pooled jump points (or as a left limit,
    which equals the value at the previous jump), so the computation is
    exact up to float rounding of the count ratios.  Always >= 0.
    """
    return float(kernels().sup_gap(x.values, y.values))


def gamma_empirical(x: EmpiricalDistribution, y: EmpiricalDistribution) -> PsiCurve:
    """Evaluate the empirical psi curve exactly and locate its argmax.

    psi(level) = 2 * integral_0^level (x-quantile - y-quantile) - (mean_x - mean_y),
    a piecewise-linear function evaluated in closed form at every breakpoint
    (no numerical quadrature).  The mean difference is taken as the full
    quantile-difference integral, which makes psi(0) == -psi(1) exact.
    """
    levels, ix, iy, seglen = psi_grid(x.n, y.n)
    cum = np.asarray(kernels().psi_cum(x.values, y.values, ix, iy, seglen))
    total = float(cum[-1])
    values = np.concatenate(([-total], 2.0 * cum - total))
    breakpoints = np.concatenate(([0.0], levels))
    magnitude = np.abs(values)
    best = float(magnitude.max())
    first = int(np.argmax(magnitude >= best - TIE_TOL))
    gamma_star = float(breakpoints[first])
    psi_at_star = float(values[first])
    gamma_hat = gamma_star if psi_at_star >= 0.0 else 1.0 - gamma_star
    return PsiCurve(
        breakpoints=breakpoints,
        values=values,
        gamma_star=gamma_star,
        psi_at_star=psi_at_star,
        gamma_hat=gamma_hat,
        degenerate=best <= TIE_TOL,
    )


def gamma_hat_stat(x: EmpiricalDistribution, y: EmpiricalDistribution) -> float:
    """The crossing-mass estimate alone, as a plain two-sample statistic."""
    return gamma_empirical(x, y).gamma_hat


def quantile_crossing_measure(x: EmpiricalDistribution, y: EmpiricalDistribution) -> float:
    """Lebesgue measure of {t : x-quantile(t) > y-quantile(t)} for the step quantiles.

    This is the crossing-mass index of the two empirical distributions
    themselves (no single-crossing assumption), and it dominates
    :func:`pi_empirical` on the same pair.
    """
    levels, ix, iy, seglen = psi_grid(x.n, y.n)
    return float(np.sum(seglen[x.values[ix] > y.values[iy]]))


def _canonical_pair(mu1: float, sigma1: float, mu2: float, sigma2: float) -> tuple[float, float]:
    """Reduce (N(mu1, sigma1^2), N(mu2, sigma2^2)) to (N(0,1), N(mu, sigma^2))."""
    for name, s in (("sigma1", sigma1), ("sigma2", sigma2)):
        if not (s > 0.0 and math.isfinite(s)):
            raise DomainError(f"{name} must be positive, got {s!r}")
    return (mu2 - mu1) / sigma1, sigma2 / sigma1


def _pi_canonical(mu, sigma):
    """Vectorized contamination index of (N(0,1), N(mu, sigma^2)).

    For sigma != 1 the two stationary points of G - F solve the
    density-crossing quadratic (sigma^2 - 1) x^2 + 2 mu x - (mu^2 +
    2 sigma^2 ln sigma) = 0; the index is the larger of G - F at the two
    roots, clipped to [0, 1].  The roots use the cancellation-free quadratic
    formula.  For sigma == 1 the supremum is max(0, 2 Phi(-mu/2) - 1).
    """
    mu, sigma = np.broadcast_arrays(
        np.asarray(mu, dtype=float), np.asarray(sigma, dtype=float)
    )
    out = np.empty(mu.shape)
    eq = sigma == 1.0
    if np.any(eq):
        out[eq] = np.maximum(0.0, 2.0 * ndtr(-0.5 * mu[eq]) - 1.0)
    ne = ~eq
    if np.any(ne):
        m = mu[ne]
        s = sigma[ne]
        a = s * s - 1.0
        b = 2.0 * m
        c = -(m * m + 2.0 * s * s * np.log(s))
        # discriminant = 4 s^2 (mu^2 + 2 (s^2 - 1) ln s) >= 0 always
        disc = np.maximum(b * b - 4.0 * a * c, 0.0)
        q = -0.5 * (b + np.where(b >= 0.0, 1.0, -1.0) * np.sqrt(disc))
        gap_at = lambda x: ndtr((x - m) / s) - ndtr(x)
        out[ne] = np.clip(np.maximum(gap_at(q / a), gap_at(c / q)), 0.0, 1.0)
    return out


def _gamma_canonical(mu, sigma):
    """Vectorized crossing-mass index of (N(0,1), N(mu, sigma^2)).

    1 - Phi(mu / |sigma - 1|) for sigma != 1; the 0/1 indicator of mu < 0
    at sigma == 1 (the quantile functions are parallel lines there).
    """
    mu, sigma = np.broadcast_arrays(
        np.asarray(mu, dtype=float), np.asarray(sigma, dtype=float)
    )
    out = np.empty(mu.shape)
    eq = sigma == 1.0
    if np.any(eq):
        out[eq] = np.where(mu[eq] >= 0.0, 0.0, 1.0)
    ne = ~eq
    if np.any(ne):
        out[ne] = 1.0 - ndtr(mu[ne] / np.abs(sigma[ne] - 1.0))
    return out


def pi_normal(mu1: float, sigma1: float, mu2: float, sigma2: float) -> float:
    """Closed-form contamination index of (N(mu1, sigma1^2), N(mu2, sigma2^2)).

    Zero exactly when the pair is stochastically ordered (equal scales and
    mu1 <= mu2).
    """
    mu, sigma = _canonical_pair(mu1, sigma1, mu2, sigma2)
    return float(_pi_canonical(mu, sigma))


def gamma_normal(mu1: float, sigma1: float, mu2: float, sigma2: float) -> float:
    """Closed-form crossing-mass index of (N(mu1, sigma1^2), N(mu2, sigma2^2))."""
    mu, sigma = _canonical_pair(mu1, sigma1, mu2, sigma2)
    return float(_gamma_canonical(mu, sigma))


def normal_indices(mu1: float, sigma1: float, mu2: float, sigma2: float) -> DominanceIndices:
    """Both closed-form indices as a validated pair."""
    return DominanceIndices(
        pi=pi_normal(mu1, sigma1, mu2, sigma2),
        gamma=gamma_normal(mu1, sigma1, mu2, sigma2),
    )


def pi_population_oracle(
    f: ContinuousModel, g: ContinuousModel, lo: float, hi: float, step: float
) -> float:
    """Brute-force contamination index: max of g.cdf - f.cdf on a grid.

    Deliberately independent of the closed forms; only as good as the grid
    covers the true maximizer.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    xs = lo + step * np.arange(count)
    return max(0.0, float(np.max(np.asarray(g.cdf(xs)) - np.asarray(f.cdf(xs)))))


def gamma_population_oracle(f: ContinuousModel, g: ContinuousModel, grid: int) -> float:
    """Brute-force crossing-mass index via a midpoint grid on (0, 1).

    Counts the fraction of midpoint levels where f's quantile exceeds g's;
    accurate to within 2/grid for continuous strictly increasing quantiles.
    """
    if grid < 1000:
        raise DomainError(f"grid must be at least 1000, got {grid}")
    ts = (np.arange(grid) + 0.5) / grid
    return float(np.mean(np.asarray(f.quantile(ts)) > np.asarray(g.quantile(ts))))
