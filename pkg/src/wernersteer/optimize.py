"""Dense 1-D grid search with bounded Brent (golden-section + parabolic) polish.

Used as the brute-force oracle for every closed-form optimum in the package,
and directly where no closed form exists (the min over Bob's angle).
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

DEFAULT_RESOLUTION = 1e-3


def grid_points(lo, hi, resolution=DEFAULT_RESOLUTION):
    n = max(int(math.ceil((hi - lo) / resolution)), 1) + 1
    return np.linspace(lo, hi, n)


def grid_maximize(func, lo, hi, resolution=DEFAULT_RESOLUTION, refine=True,
                  xatol=1e-12):
    """Maximise a vectorised scalar function on [lo, hi].

    ``func`` must accept a 1-D array and return values of the same shape.
    The best grid point is polished inside its two neighbouring cells.

    Returns
    -------
    x, fx : float
    """
    xs = grid_points(lo, hi, resolution)
    ys = np.asarray(func(xs), dtype=float)
    i = int(np.nanargmax(ys))
    x_best, f_best = float(xs[i]), float(ys[i])
    if not refine:
        return x_best, f_best
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    if right > left:
        res = minimize_scalar(lambda x: -float(func(np.array([x]))[0]),
                              bounds=(left, right), method="bounded",
                              options={"xatol": xatol})
        if -res.fun > f_best:
            x_best, f_best = float(res.x), float(-res.fun)
    return x_best, f_best


def grid_minimize(func, lo, hi, resolution=DEFAULT_RESOLUTION, refine=True,
                  xatol=1e-12):
    """Minimise a vectorised scalar function on [lo, hi]; see :func:`grid_maximize`."""
    x, fx = grid_maximize(lambda xs: -np.asarray(func(xs), dtype=float),
                          lo, hi, resolution, refine, xatol)
    return x, -fx
