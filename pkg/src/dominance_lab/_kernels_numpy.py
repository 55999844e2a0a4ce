"""Pure numpy fallback kernels, bit-compatible with :mod:`._kernels_numba`.

The row-wise sup computation relies on a stable pooled argsort: within a run
of tied values the x entries (columns < n) precede the y entries, so the
running gap dips then rises inside the run and never exceeds the values at
run boundaries.  The maximum over all positions therefore equals the maximum
over valid evaluation points, with no tie masking needed.
"""
from __future__ import annotations

import numpy as np


def sup_gap(xs, ys):
    n = xs.shape[0]
    m = ys.shape[0]
    pooled = np.concatenate((xs, ys))
    gap = (
        np.searchsorted(ys, pooled, side="right") / m
        - np.searchsorted(xs, pooled, side="right") / n
    )
    return max(0.0, float(gap.max()))


def sup_gap_rows(x_rows, y_rows):
    n = x_rows.shape[1]
    m = y_rows.shape[1]
    pooled = np.concatenate((x_rows, y_rows), axis=1)
    order = np.argsort(pooled, axis=1, kind="stable")
    cum_y = np.cumsum(order >= n, axis=1)
    pos = np.arange(1, n + m + 1)
    gap = cum_y / m - (pos - cum_y) / n
    return np.maximum(gap.max(axis=1), 0.0)


def psi_cum(xs, ys, ix, iy, seglen):
    return np.cumsum((xs[ix] - ys[iy]) * seglen)


def gamma_hat_rows(x_rows, y_rows, levels, ix, iy, seglen, tie_tol):
    cum = np.cumsum((x_rows[:, ix] - y_rows[:, iy]) * seglen, axis=1)
    total = cum[:, -1:]
    psi = np.concatenate((-total, 2.0 * cum - total), axis=1)
    magnitude = np.abs(psi)
    best = magnitude.max(axis=1, keepdims=True)
    first = np.argmax(magnitude >= best - tie_tol, axis=1)
    levels0 = np.concatenate(([0.0], levels))
    star_level = levels0[first]
    psi_star = psi[np.arange(psi.shape[0]), first]
    return np.where(psi_star >= 0.0, star_level, 1.0 - star_level)
