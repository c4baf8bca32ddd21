"""Rank-frequency law estimation: f(r) = C r^-alpha (r + gamma)^-beta.

Typical use::

    from ranklaw import build_rank_list, tokenize, compress, search
    series = compress(build_rank_list(tokenize(text)))
    params, trace = search(series)
"""

from .corpus import RawRankList, TokenizationConfig, build_rank_list, tokenize
from .errors import (
    CorpusDecodeError,
    DegenerateCorpusError,
    DegenerateMomentsError,
    EmptyCorpusError,
    InsufficientPointsError,
    InvalidInitializationError,
    NoOptimumError,
    RankLawError,
    ShapeDomainError,
)
from .estimator import (
    MomentSummary,
    ParameterSet,
    TransformedSeries,
    closed_form_C,
    estimate,
    estimate_alpha_beta,
    moments,
    transform,
)
from .refine import FitReport, predict_log_f, refine, rmse
from .report import RunResult, emit_plot_data
from .search import GammaGrid, GammaSearchTrace, coefficient_series, search, stability
from .series import RankFrequencySeries, compress, information_equivalence_check
from .synth import synthesize

__version__ = "0.1.0"
