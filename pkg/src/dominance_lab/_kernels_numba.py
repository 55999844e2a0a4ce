"""Numba-compiled hot loops.

Must stay observationally identical to :mod:`._kernels_numpy`: same inputs,
bit-identical outputs.  Both modules are exercised against each other in the
test suite, so any change here needs a mirror change there.
"""
from __future__ import annotations

import numba
import numpy as np

_jit = numba.njit(cache=True, nogil=True)


@_jit
def sup_gap(xs, ys):
    """Sup over the line of (ecdf of ys) - (ecdf of xs), both sorted."""
    n = xs.shape[0]
    m = ys.shape[0]
    i = 0
    j = 0
    best = 0.0
    while i < n or j < m:
        if j >= m or (i < n and xs[i] <= ys[j]):
            v = xs[i]
        else:
            v = ys[j]
        while i < n and xs[i] == v:
            i += 1
        while j < m and ys[j] == v:
            j += 1
        gap = j / m - i / n
        if gap > best:
            best = gap
    return best


@_jit
def sup_gap_rows(x_rows, y_rows):
    """Row-wise :func:`sup_gap` over pre-sorted 2-d sample blocks."""
    nrows = x_rows.shape[0]
    out = np.empty(nrows)
    for b in range(nrows):
        out[b] = sup_gap(x_rows[b], y_rows[b])
    return out


@_jit
def psi_cum(xs, ys, ix, iy, seglen):
    """Cumulative integral of the quantile difference over the grid pieces."""
    size = ix.shape[0]
    cum = np.empty(size)
    acc = 0.0
    for k in range(size):
        acc += (xs[ix[k]] - ys[iy[k]]) * seglen[k]
        cum[k] = acc
    return cum


@_jit
def gamma_hat_rows(x_rows, y_rows, levels, ix, iy, seglen, tie_tol):
    """Row-wise single-crossing estimate of the crossing-mass index.

    Implements: smallest breakpoint attaining max |psi| (ties within
    ``tie_tol``), mapped through the sign rule psi >= 0 -> level,
    psi < 0 -> 1 - level.
    """
    nrows = x_rows.shape[0]
    size = ix.shape[0]
    out = np.empty(nrows)
    cum = np.empty(size)
    for b in range(nrows):
        xs = x_rows[b]
        ys = y_rows[b]
        acc = 0.0
        for k in range(size):
            acc += (xs[ix[k]] - ys[iy[k]]) * seglen[k]
            cum[k] = acc
        total = acc
        best = abs(total)  # |psi(0)| == |psi(1)| == |total|
        for k in range(size):
            a = abs(2.0 * cum[k] - total)
            if a > best:
                best = a
        if abs(total) >= best - tie_tol:
            star_level = 0.0
            psi_star = -total
        else:
            star_level = 1.0
            psi_star = total
            for k in range(size):
                p = 2.0 * cum[k] - total
                if abs(p) >= best - tie_tol:
                    star_level = levels[k]
                    psi_star = p
                    break
        out[b] = star_level if psi_star >= 0.0 else 1.0 - star_level
    return out
