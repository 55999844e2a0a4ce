"""Breakpoint grids shared by the psi-curve kernels.

For sample sizes (n, m) the union of the quantile jump levels {i/n} and
{j/m} depends only on (n, m), so the grid is built once per size pair and
cached.  Levels equal as rationals (i*m == j*n) are merged using exact
integer comparisons; the resulting floats are identical on both sides, so
no tolerance is involved.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np


@lru_cache(maxsize=128)
def psi_grid(n: int, m: int):
    """Return (levels, ix, iy, seglen) for the piecewise-linear psi curve.

    ``levels`` are the n + m - gcd(n, m) breakpoints in (0, 1]; on the piece
    ending at ``levels[k]`` the quantile difference is
    ``x[ix[k]] - y[iy[k]]`` and the piece has length ``seglen[k]``.
    """
    size = n + m - gcd(n, m)
    levels = np.empty(size)
    ix = np.empty(size, dtype=np.int64)
    iy = np.empty(size, dtype=np.int64)
    seglen = np.empty(size)
    i = j = 1
    k = 0
    prev = 0.0
    while i <= n or j <= m:
        ix[k] = i - 1
        iy[k] = j - 1
        if j > m or (i <= n and i * m <= j * n):
            t = i / n
            if i * m == j * n:
                j += 1
            i += 1
        else:
            t = j / m
            j += 1
        levels[k] = t
        seglen[k] = t - prev
        prev = t
        k += 1
    assert k == size
    for arr in (levels, ix, iy, seglen):
        arr.setflags(write=False)
    return levels, ix, iy, seglen
