"""Derivative-free minimizers for noisy objectives."""

from __future__ import annotations

from typing import Callable

import numpy as np
import scipy.optimize
from scipy.optimize import OptimizeResult


def implicit_filtering(
    objective: Callable[[np.ndarray], float],
    x0,
    initial_step: float = 0.1,
    min_step: float = 1e-6,
    budget: int = 1000,
) -> OptimizeResult:
    """Coordinate-stencil implicit filtering.

    At step size ``h`` the objective is sampled at ``x +/- h e_k`` for every
    coordinate. The center moves to the best stencil point if that point
    improves on the center, otherwise ``h`` is halved. Ties go to the lowest
    coordinate index, ``+`` before ``-``. Stops once ``h < min_step`` or after
    ``budget`` evaluations; in the latter case ``success`` is False and the
    best point so far is returned.
    """
    if not initial_step > min_step > 0:
        raise ValueError("need initial_step > min_step > 0")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    x = np.array(x0, dtype=float)
    fx = float(objective(x))
    nfev = 1
    h = float(initial_step)
    nit = 0
    while h >= min_step:
        best_f, best_x = fx, None
        for k in range(len(x)):
            for sign in (1.0, -1.0):
                if nfev >= budget:
                    if best_x is not None:
                        x, fx = best_x, best_f
                    return OptimizeResult(
                        x=x, fun=fx, nfev=nfev, nit=nit, step=h, success=False,
                        message="evaluation budget exhausted",
                    )
                trial = x.copy()
                trial[k] += sign * h
                ft = float(objective(trial))
                nfev += 1
                if ft < best_f:
                    best_f, best_x = ft, trial
        nit += 1
        if best_x is None:
            h *= 0.5
        else:
            x, fx = best_x, best_f
    return OptimizeResult(
        x=x, fun=fx, nfev=nfev, nit=nit, step=h, success=True,
        message="stencil size below minimum",
    )


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    x0,
    initial_step: float = 0.1,
    budget: int = 1000,
    xatol: float = 1e-6,
) -> OptimizeResult:
    """SciPy Nelder-Mead stopping on simplex size alone."""
    x0 = np.asarray(x0, dtype=float)
    simplex = np.vstack([x0, x0 + initial_step * np.eye(len(x0))])
    res = scipy.optimize.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxfev": budget,
            "xatol": xatol,
            "fatol": np.inf,
            "initial_simplex": simplex,
        },
    )
    if not res.success:
        res.message = "evaluation budget exhausted"
    else:
        res.message = "simplex diameter below tolerance"
    return res
