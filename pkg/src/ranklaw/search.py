"""Grid search for gamma by the stability of the per-point constants.

For each candidate gamma the moment estimate gives alpha and beta, every
inner point then implies its own proportionality constant ``C_i``, and the
variance of those constants scores the candidate.  The best gamma is the
one whose constants agree most.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import (
    DegenerateMomentsError,
    InsufficientPointsError,
    NoOptimumError,
    RankLawError,
    ShapeDomainError,
)
from .estimator import (
    LN10,
    ParameterSet,
    closed_form_C,
    estimate_alpha_beta,
    is_admissible,
    moments,
    pow10,
    transform,
)
from .refine import log10_r_plus_gamma
from .series import RankFrequencySeries

FLAT_TAIL_RATIO = 1e-3
MAX_CANDIDATES = 10**7


@dataclass(frozen=True)
class GammaGrid:
    lo: float = 0.0
    hi: float = 10.0
    step: float = 1e-3

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise RankLawError(f"grid needs lo < hi, got lo={self.lo}, hi={self.hi}")
        if not self.step > 0:
            raise RankLawError(f"grid step must be positive, got {self.step}")
        if (self.hi - self.lo) / self.step > MAX_CANDIDATES:
            raise RankLawError("grid has more than 1e7 candidates")

    def values(self) -> np.ndarray:
        k = int(math.floor((self.hi - self.lo) / self.step * (1 + 1e-12)))
        return self.lo + np.arange(k + 1) * self.step


@dataclass(frozen=True)
class Candidate:
    log10_gamma: float
    log10_VC: float  # nan marks a failed candidate
    alpha: float
    beta: float

    @property
    def failed(self) -> bool:
        return math.isnan(self.log10_VC)

    @property
    def admissible(self) -> bool:
        return not self.failed and is_admissible(self.alpha, self.beta)


@dataclass
class GammaSearchTrace:
    candidates: list
    best_index: int
    boundary_hit: bool
    flat_tail: bool
    closed_form: bool = True
    options: dict = field(default_factory=dict)

    @property
    def best(self) -> Candidate:
        return self.candidates[self.best_index]

    @property
    def identifiable(self) -> bool:
        return not self.flat_tail

    def column(self, name: str) -> np.ndarray:
        if name == "admissible":
            return np.array([c.admissible for c in self.candidates])
        return np.array([getattr(c, name) for c in self.candidates], dtype=float)


def _log10_coefficients(r, f, alpha, beta, log10_gamma, jacobian_factor, relative=False):
    # log10 C_i = log10 f_i + (alpha [+1]) log10 t_i + (alpha+beta) log10(r_i + gamma)
    # since log10 gamma - log10(1 - t_i) = log10(r_i + gamma).  With `relative`
    # the last log is taken against r_1 + gamma, exact via log1p, so that
    # huge alpha+beta at large gamma does not swamp the spread of the C_i.
    lrg = log10_r_plus_gamma(r, log10_gamma)
    log_t = np.log10(r) - lrg
    head = alpha + (1.0 if jacobian_factor else 0.0)
    if relative:
        g = pow10(log10_gamma)
        tail = np.log1p((r - r[0]) / (r[0] + g)) / LN10
    else:
        tail = lrg
    return np.log10(f) + head * log_t + (alpha + beta) * tail


def coefficient_series(
    series: RankFrequencySeries, params: ParameterSet, jacobian_factor: bool = False
) -> np.ndarray:
    """log10 of the constant ``C_i`` implied by each inner point ``i = 1..n-1``.

    By default ``C_i = f_i r_i^alpha (r_i + gamma)^beta``, the exact inverse of
    the law.  ``jacobian_factor=True`` multiplies in one more ``t_i``.
    """
    if series.n < 3:
        raise InsufficientPointsError(f"need n >= 3 points for constants, got n={series.n}")
    r, f = series.inner()
    return _log10_coefficients(
        r.astype(float), f.astype(float), params.alpha, params.beta,
        params.log10_gamma, jacobian_factor,
    )


def _log10_variance(x: np.ndarray, linear: bool) -> float:
    if linear:
        top = float(np.max(x))
        v = float(np.var(10.0 ** (x - top)))
        return 2.0 * top + math.log10(v) if v > 0 else -math.inf
    v = float(np.var(x))
    return math.log10(v) if v > 0 else -math.inf


def stability(
    series: RankFrequencySeries,
    log10_gamma: float,
    linear_variance: bool = False,
    jacobian_factor: bool = False,
) -> tuple[float, float, float]:
    """Score one gamma: ``(log10 variance of the constants, alpha, beta)``.

    Raises DegenerateMomentsError when the moments collapse at this gamma.
    """
    if series.n < 3:
        raise InsufficientPointsError(f"need n >= 3 points for constants, got n={series.n}")
    alpha, beta = estimate_alpha_beta(moments(transform(series, log10_gamma)))
    r, f = series.inner()
    # log-scale variance is shift invariant; linear-scale variance is not
    x = _log10_coefficients(
        r.astype(float), f.astype(float), alpha, beta, log10_gamma, jacobian_factor,
        relative=not linear_variance,
    )
    return _log10_variance(x, linear_variance), alpha, beta


def _evaluate(series, lg, linear_variance, jacobian_factor) -> Candidate:
    try:
        v, a, b = stability(series, float(lg), linear_variance, jacobian_factor)
    except DegenerateMomentsError:
        return Candidate(float(lg), math.nan, math.nan, math.nan)
    return Candidate(float(lg), v, a, b)


def default_threads() -> int:
    env = os.environ.get("RANKLAW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise RankLawError(f"RANKLAW_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def scan(series, values, linear_variance=False, jacobian_factor=False, threads=None) -> list:
    threads = threads or default_threads()
    if threads <= 1 or len(values) < 64:
        return [_evaluate(series, lg, linear_variance, jacobian_factor) for lg in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves input order, so the reduction below stays deterministic
        return list(
            pool.map(lambda lg: _evaluate(series, lg, linear_variance, jacobian_factor), values)
        )


def best_index(candidates) -> int:
    """Minimum score; ties and -inf go to the smallest gamma."""
    scores = np.array([c.log10_VC for c in candidates], dtype=float)
    ok = ~np.isnan(scores)
    if not ok.any():
        raise NoOptimumError("every gamma candidate failed")
    masked = np.where(ok, scores, np.inf)
    return int(np.flatnonzero(masked == masked.min())[0])


def detect_flat_tail(log10_gamma: np.ndarray, scores: np.ndarray, hi: float) -> bool:
    """Whether the score settles into a plateau with no optimum below it.

    Over the top decade of the grid (``log10_gamma >= hi - 1``) the score
    must vary by less than FLAT_TAIL_RATIO of its whole-grid range, and no
    candidate anywhere may undercut that plateau by more than the same
    amount.  Every series flattens out once gamma dwarfs the vocabulary;
    word-like series additionally dip well below the plateau near their
    optimum, character-like series do not.
    """
    ok = np.isfinite(scores)
    top = ok & (log10_gamma >= hi - 1.0 - 1e-12)
    if ok.sum() < 2 or top.sum() < 2:
        return False
    spread = float(np.ptp(scores[ok]))
    if spread == 0.0:
        return True
    tol = FLAT_TAIL_RATIO * spread
    plateau = scores[top]
    return bool(np.ptp(plateau) < tol and np.min(scores[ok]) >= np.min(plateau) - tol)


def _finish(series, candidates, grid_lo, grid_hi, options) -> tuple[ParameterSet, GammaSearchTrace]:
    idx = best_index(candidates)
    best = candidates[idx]
    lg = np.array([c.log10_gamma for c in candidates])
    scores = np.array([c.log10_VC for c in candidates])
    m = moments(transform(series, best.log10_gamma))
    try:
        log10_C = closed_form_C(best.alpha, best.beta, best.log10_gamma, math.log10(m.Z0))
        closed = True
    except ShapeDomainError:
        provisional = ParameterSet(best.alpha, best.beta, best.log10_gamma, 0.0)
        log10_C = float(
            np.mean(coefficient_series(series, provisional, options.get("jacobian_factor", False)))
        )
        closed = False
    params = ParameterSet(best.alpha, best.beta, best.log10_gamma, log10_C)
    trace = GammaSearchTrace(
        candidates=candidates,
        best_index=idx,
        boundary_hit=idx == 0 or idx == len(candidates) - 1,
        flat_tail=detect_flat_tail(lg, scores, grid_hi),
        closed_form=closed,
        options=options,
    )
    return params, trace


def search(
    series: RankFrequencySeries,
    grid: GammaGrid = GammaGrid(),
    linear_variance: bool = False,
    jacobian_factor: bool = False,
    coarse_to_fine: bool = False,
    threads: Optional[int] = None,
) -> tuple[ParameterSet, GammaSearchTrace]:
    """Exhaustive search of `grid`, returning the best parameters and the trace.

    With `coarse_to_fine` the grid is first scanned at a step of 0.1 (or the
    grid step if coarser) and then at full resolution within one coarse step
    of the coarse optimum.  The trace then holds only the fine candidates.
    """
    options = {
        "grid": {"lo": grid.lo, "hi": grid.hi, "step": grid.step},
        "linear_variance": linear_variance,
        "jacobian_factor": jacobian_factor,
        "coarse_to_fine": coarse_to_fine,
    }
    values = grid.values()
    if coarse_to_fine and grid.step < 0.1:
        coarse = GammaGrid(grid.lo, grid.hi, 0.1)
        rough = scan(series, coarse.values(), linear_variance, jacobian_factor, threads)
        centre = rough[best_index(rough)].log10_gamma
        values = values[np.abs(values - centre) <= 0.1 + 1e-9]
        fine = scan(series, values, linear_variance, jacobian_factor, threads)
        params, trace = _finish(series, fine, grid.lo, grid.hi, options)
        # flat-tail and boundary diagnostics need the whole range
        lg = np.array([c.log10_gamma for c in rough])
        trace.flat_tail = detect_flat_tail(lg, np.array([c.log10_VC for c in rough]), grid.hi)
        ends = grid.values()[[0, -1]]
        trace.boundary_hit = bool(np.any(np.abs(ends - params.log10_gamma) < grid.step / 2))
        return params, trace
    candidates = scan(series, values, linear_variance, jacobian_factor, threads)
    return _finish(series, candidates, grid.lo, grid.hi, options)


TRACE_HEADER = "log10_gamma\tlog10_VC\talpha\tbeta\tadmissible"


def format_trace_tsv(trace: GammaSearchTrace, mark_optimum: bool = False) -> str:
    header = TRACE_HEADER + ("\toptimum" if mark_optimum else "")
    lines = ["#" + header]
    for k, c in enumerate(trace.candidates):
        row = f"{c.log10_gamma!r}\t{c.log10_VC!r}\t{c.alpha!r}\t{c.beta!r}\t{int(c.admissible)}"
        if mark_optimum:
            row += f"\t{int(k == trace.best_index)}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def write_trace_tsv(trace: GammaSearchTrace, path, mark_optimum: bool = False) -> None:
    Path(path).write_text(format_trace_tsv(trace, mark_optimum), encoding="utf-8")


def read_trace_tsv(path) -> list:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        out.append(Candidate(float(cols[0]), float(cols[1]), float(cols[2]), float(cols[3])))
    return out
