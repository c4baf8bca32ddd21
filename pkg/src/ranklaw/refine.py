"""Log-space least-squares refinement and RMSE.

The model in log10 form is::

    y(r) = log10_C - alpha * log10(r) - beta * log10(r + 10**log10_gamma)

and the objective is the plain sum of squared residuals against
``log10 f_i`` over the points ``1..n-1`` of a series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInitializationError
from .estimator import LN10, ParameterSet
from .series import RankFrequencySeries

MAX_ITER = 200
REL_TOL = 1e-10


def log10_r_plus_gamma(r, log10_gamma: float) -> np.ndarray:
    """``log10(r + 10**log10_gamma)`` without overflow for either term."""
    lr = np.log(np.asarray(r, dtype=float))
    return np.logaddexp(lr, log10_gamma * LN10) / LN10


def predict_log_f(params: ParameterSet, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return (
        params.log10_C
        - params.alpha * np.log10(r)
        - params.beta * log10_r_plus_gamma(r, params.log10_gamma)
    )


def jacobian(params: ParameterSet, r) -> np.ndarray:
    """Partials of :func:`predict_log_f`, columns ordered (log10_C, alpha, beta, log10_gamma)."""
    r = np.asarray(r, dtype=float)
    lg = params.log10_gamma
    # d/dg log10(r + 10^g) = 10^g / (r + 10^g) = 1 / (1 + r 10^-g)
    share = 1.0 / (1.0 + np.exp(np.log(r) - lg * LN10))
    return np.column_stack(
        [
            np.ones_like(r),
            -np.log10(r),
            -log10_r_plus_gamma(r, lg),
            -params.beta * share,
        ]
    )


def _data(series: RankFrequencySeries):
    r, f = series.inner()
    return r.astype(float), np.log10(f.astype(float))


def rmse(series: RankFrequencySeries, params: ParameterSet) -> float:
    r, y = _data(series)
    res = y - predict_log_f(params, r)
    return math.sqrt(float(np.mean(res * res)))


@dataclass
class FitReport:
    initial: ParameterSet
    refined: ParameterSet
    rmse_initial: float
    rmse_refined: float
    iterations: int
    converged: bool
    # objective after each accepted step, starting with the initial value
    history: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {
            "initial": self.initial.as_dict(),
            "refined": self.refined.as_dict(),
            "rmse_initial": self.rmse_initial,
            "rmse_refined": self.rmse_refined,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def refine(
    series: RankFrequencySeries,
    init: ParameterSet,
    max_iter: int = MAX_ITER,
    rel_tol: float = REL_TOL,
) -> FitReport:
    """Levenberg-Marquardt over all four parameters, unconstrained.

    Damping is scaled by the diagonal of ``J^T J``; it shrinks tenfold after
    an accepted step and grows tenfold after a rejected one.  Iteration stops
    when an accepted step improves the objective by less than `rel_tol`
    relatively, when no damping yields an improvement, or after `max_iter`
    iterations.
    """
    r, y = _data(series)

    def sse(p):
        res = y - predict_log_f(ParameterSet.from_array(p), r)
        return float(res @ res), res

    p = init.as_array()
    if not np.all(np.isfinite(p)):
        raise InvalidInitializationError(f"non-finite initial parameters {init}")
    s, res = sse(p)
    if not math.isfinite(s):
        raise InvalidInitializationError(f"objective is not finite at {init}")

    history = [s]
    lam = 1e-3
    converged = s == 0.0
    it = 0
    while not converged and it < max_iter:
        it += 1
        J = jacobian(ParameterSet.from_array(p), r)
        A = J.T @ J
        g = J.T @ res
        d = np.maximum(np.diag(A), 1e-12 * max(float(np.max(np.diag(A))), 1e-300))
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * np.diag(d), g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            p_new = p + step
            s_new, res_new = sse(p_new)
            if math.isfinite(s_new) and s_new < s:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            # no descent direction left at machine precision
            converged = True
            break
        rel = (s - s_new) / s
        p, s, res = p_new, s_new, res_new
        history.append(s)
        lam = max(lam / 10.0, 1e-12)
        if rel < rel_tol or s == 0.0:
            converged = True

    refined = ParameterSet.from_array(p)
    return FitReport(
        initial=init,
        refined=refined,
        rmse_initial=rmse(series, init),
        rmse_refined=rmse(series, refined),
        iterations=it,
        converged=converged,
        history=history,
    )
