"""Moment estimation of the rank-frequency law for a fixed gamma.

Under ``t = r / (r + gamma)`` the law ``f(r) = C r^-alpha (r + gamma)^-beta``
becomes a Beta(1 - alpha, alpha + beta + 1) density in ``t``.  The series is
read as a step density in ``t`` whose first moments give alpha and beta in
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import betaln

from .errors import DegenerateMomentsError, ShapeDomainError
from .series import RankFrequencySeries

LN10 = math.log(10.0)


@dataclass(frozen=True)
class ParameterSet:
    alpha: float
    beta: float
    log10_gamma: float
    log10_C: float

    @property
    def gamma(self) -> float:
        return pow10(self.log10_gamma)

    @property
    def admissible(self) -> bool:
        return is_admissible(self.alpha, self.beta)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "log10_gamma": self.log10_gamma,
            "log10_C": self.log10_C,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterSet":
        return cls(
            float(d["alpha"]), float(d["beta"]), float(d["log10_gamma"]), float(d["log10_C"])
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.log10_C, self.alpha, self.beta, self.log10_gamma])

    @classmethod
    def from_array(cls, p) -> "ParameterSet":
        return cls(alpha=float(p[1]), beta=float(p[2]), log10_gamma=float(p[3]), log10_C=float(p[0]))


def is_admissible(alpha: float, beta: float) -> bool:
    """Head slope below one and a tail with a mean but no variance."""
    return bool(alpha < 1.0 and 2.0 < alpha + beta < 3.0)


@dataclass(frozen=True)
class TransformedSeries:
    """Points ``(t_i, f_i)`` with ``t_i = r_i / (r_i + gamma)``.

    When ``ranks`` is kept, interval widths and complements ``1 - t`` are
    recomputed from the ranks instead of differenced from ``t``, which keeps
    full relative precision when ``t`` crowds against 0 or 1.
    """

    gamma: float
    t: np.ndarray
    f: np.ndarray
    ranks: Optional[np.ndarray] = None

    def widths(self) -> np.ndarray:
        if self.ranks is None:
            return np.diff(self.t)
        r = self.ranks.astype(float)
        g = self.gamma
        # t_i - t_{i-1} = g (r_i - r_{i-1}) / ((r_i + g)(r_{i-1} + g))
        return (g / (r[1:] + g)) * (np.diff(r) / (r[:-1] + g))

    def complements(self) -> np.ndarray:
        if self.ranks is None:
            return 1.0 - self.t
        return self.gamma / (self.ranks.astype(float) + self.gamma)


@dataclass(frozen=True)
class MomentSummary:
    Z0: float
    Z1: float
    Z2: float
    mean: float
    variance: float
    # E[1 - T], carried separately so mean near 1 keeps precision
    complement: Optional[float] = None

    def __post_init__(self):
        if self.complement is None:
            object.__setattr__(self, "complement", 1.0 - self.mean)
        if not (self.variance > 0.0 and math.isfinite(self.variance)):
            raise DegenerateMomentsError(f"non-positive variance {self.variance!r}")
        if not (0.0 < self.mean < 1.0 and self.complement > 0.0):
            raise DegenerateMomentsError(f"mean {self.mean!r} outside (0, 1)")
        if not self.concentration > 1.0:
            raise DegenerateMomentsError(
                "mean*(1-mean)/variance <= 1; implied beta shapes are non-positive"
            )

    @property
    def concentration(self) -> float:
        """``E(1-E)/V``, which equals ``a + b + 1`` for Beta(a, b)."""
        return self.mean * self.complement / self.variance

    @classmethod
    def from_mean_variance(cls, mean: float, variance: float, complement=None) -> "MomentSummary":
        z2 = variance + mean * mean
        return cls(1.0, mean, z2, mean, variance, complement)


def pow10(x: float) -> float:
    """``10**x`` saturating to inf instead of raising OverflowError."""
    with np.errstate(over="ignore"):
        return float(np.power(10.0, x))


def transform(series: RankFrequencySeries, log10_gamma: float) -> TransformedSeries:
    if not math.isfinite(log10_gamma):
        raise ValueError(f"log10_gamma must be finite, got {log10_gamma!r}")
    g = pow10(log10_gamma)
    r = series.ranks.astype(float)
    with np.errstate(invalid="ignore"):
        t = r / (r + g)
    return TransformedSeries(g, t, series.freqs.astype(float), series.ranks)


def _fsum(x: np.ndarray) -> float:
    return math.fsum(x.tolist())


def moments(ts: TransformedSeries) -> MomentSummary:
    """Moments of the step density that equals ``f_{i-1}`` on ``[t_{i-1}, t_i)``.

    Each interval integral of ``t^k`` is evaluated in the factored form
    ``dt * sum_j t_i^j t_{i-1}^(k-j) / (k+1)`` and the intervals are summed
    with exact rounding.  The variance is integrated about the mean rather
    than taken as ``E[T^2] - E[T]^2``.
    """
    t = np.asarray(ts.t, dtype=float)
    f = np.asarray(ts.f, dtype=float)
    if t.size < 3:
        raise DegenerateMomentsError("need at least three points")
    with np.errstate(all="ignore"):
        return _moments(ts, t, f)


def _moments(ts, t, f) -> MomentSummary:
    dt = ts.widths()
    w = f[:-1] * dt
    lo, hi = t[:-1], t[1:]
    s = ts.complements()
    z0 = _fsum(w)
    if not (z0 > 0.0 and math.isfinite(z0)):
        raise DegenerateMomentsError(f"total mass {z0!r} is not positive")
    z1 = _fsum(w * (lo + hi)) / 2.0
    z2 = _fsum(w * (lo * lo + lo * hi + hi * hi)) / 3.0
    mean = z1 / z0
    comp = _fsum(w * (s[:-1] + s[1:])) / 2.0 / z0
    a, b = lo - mean, hi - mean
    var = _fsum(w * (a * a + a * b + b * b)) / 3.0 / z0
    return MomentSummary(z0, z1, z2, mean, var, comp)


def estimate_alpha_beta(m: MomentSummary) -> tuple[float, float]:
    k = m.concentration
    alpha = m.mean * (1.0 - k) + 1.0
    beta = k - 3.0
    return alpha, beta


def closed_form_C(alpha: float, beta: float, log10_gamma: float, log10_mass: float = 0.0) -> float:
    """log10 of ``C = mass * gamma^(alpha+beta) / B(1-alpha, alpha+beta+1)``.

    With ``log10_mass = 0`` this is the constant of the normalised density;
    pass ``log10(Z0)`` to put it on the scale of the raw counts.
    """
    a, b = 1.0 - alpha, alpha + beta + 1.0
    if not (a > 0.0 and b > 0.0):
        raise ShapeDomainError(a, b)
    return log10_mass + (alpha + beta) * log10_gamma - float(betaln(a, b)) / LN10


def estimate(series: RankFrequencySeries, log10_gamma: float) -> tuple[ParameterSet, MomentSummary]:
    """Full moment estimate at one gamma, with C on the count scale."""
    m = moments(transform(series, log10_gamma))
    alpha, beta = estimate_alpha_beta(m)
    log10_C = closed_form_C(alpha, beta, log10_gamma, math.log10(m.Z0))
    return ParameterSet(alpha, beta, log10_gamma, log10_C), m
