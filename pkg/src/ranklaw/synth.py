"""Synthetic rank-frequency lists drawn exactly from the law."""

from __future__ import annotations

import numpy as np

from .corpus import RawRankList
from .errors import RankLawError
from .estimator import ParameterSet


def law_log10(params: ParameterSet, r) -> np.ndarray:
    from .refine import predict_log_f

    return predict_log_f(params, r)


def synthesize(params: ParameterSet, max_rank: int) -> RawRankList:
    """Integer frequencies ``round(f(r))`` for ``r = 1..max_rank``.

    The list stops before the first rank whose unrounded frequency drops
    below 1, so the tail ends in singletons.
    """
    if max_rank < 1:
        raise RankLawError("max_rank must be positive")
    r = np.arange(1, int(max_rank) + 1)
    y = law_log10(params, r)
    below = np.flatnonzero(y < 0.0)
    if below.size:
        y = y[: below[0]]
    if y.size == 0:
        raise RankLawError("law gives f(1) < 1; nothing to generate")
    freqs = np.rint(10.0**y).astype(np.int64)
    if np.any(np.diff(freqs) > 0):
        raise RankLawError("parameters give a frequency that increases with rank")
    tokens = tuple(f"w{k}" for k in range(1, freqs.size + 1))
    return RawRankList.from_frequencies(freqs, tokens)
