"""Estimation-ready rank-frequency series.

Equal-frequency runs of the raw list collapse to their first rank, the
zeroth word ``(0, total_tokens)`` is prepended and the terminal sentinel
``(|V|+1, 0)`` is appended.  The sentinel keeps the length of the last run
(usually the singletons), so the construction loses nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import RawRankList, parse_rank_tsv
from .errors import DegenerateCorpusError, FormatError


@dataclass(frozen=True, eq=False)
class RankFrequencySeries:
    ranks: np.ndarray
    freqs: np.ndarray
    vocab_size: int
    total_tokens: int

    def __post_init__(self):
        r = np.asarray(self.ranks, dtype=np.int64)
        f = np.asarray(self.freqs, dtype=np.int64)
        object.__setattr__(self, "ranks", r)
        object.__setattr__(self, "freqs", f)
        if r.shape != f.shape or r.ndim != 1:
            raise FormatError("ranks and freqs must be 1-d arrays of equal length")
        if r.size < 3:
            raise DegenerateCorpusError("series needs at least three points (n >= 2)")
        if r[0] != 0 or f[0] != self.total_tokens:
            raise FormatError("first point must be the zeroth word (0, total_tokens)")
        if r[-1] != self.vocab_size + 1 or f[-1] != 0:
            raise FormatError("last point must be the sentinel (|V|+1, 0)")
        if np.any(np.diff(r) <= 0):
            raise FormatError("ranks must be strictly increasing")
        if np.any(np.diff(f) >= 0):
            raise DegenerateCorpusError("frequencies must be strictly decreasing")

    def __eq__(self, other):
        if not isinstance(other, RankFrequencySeries):
            return NotImplemented
        return np.array_equal(self.ranks, other.ranks) and np.array_equal(self.freqs, other.freqs)

    __hash__ = None

    @property
    def n(self) -> int:
        """Index of the sentinel; the series holds points ``0..n``."""
        return int(self.ranks.size) - 1

    @property
    def points(self) -> list[tuple[int, int]]:
        return list(zip(self.ranks.tolist(), self.freqs.tolist()))

    def inner(self):
        """Points ``1..n-1``: everything except the zeroth word and sentinel."""
        return self.ranks[1:-1], self.freqs[1:-1]


def compress(raw: RawRankList) -> RankFrequencySeries:
    f = raw.frequencies
    if raw.vocab_size < 2:
        raise DegenerateCorpusError(
            "vocabulary of size 1 gives f0 == f1; not a natural corpus"
        )
    if raw.total_tokens <= f[0]:
        raise DegenerateCorpusError("total token count must exceed the top frequency")
    keep = np.ones(f.size, dtype=bool)
    keep[1:] = f[1:] != f[:-1]
    ranks = np.concatenate(([0], raw.ranks[keep], [raw.vocab_size + 1]))
    freqs = np.concatenate(([raw.total_tokens], f[keep], [0]))
    return RankFrequencySeries(ranks, freqs, raw.vocab_size, raw.total_tokens)


def expand(ranks, freqs) -> np.ndarray:
    """Step-wise expansion of retained points back to per-rank frequencies.

    ``ranks``/``freqs`` are the retained points from rank 1 on, ending with a
    zero-frequency sentinel; every rank in ``r_i .. r_{i+1}-1`` gets ``f_i``.
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    freqs = np.asarray(freqs, dtype=np.int64)
    widths = np.diff(ranks)
    return np.repeat(freqs[:-1], widths)


def information_equivalence_check(raw: RawRankList, series) -> bool:
    """True iff `series` expands back to exactly `raw`.

    `series` may be a :class:`RankFrequencySeries` or any sequence of
    ``(rank, frequency)`` points, so truncated point lists can be checked too.
    """
    if isinstance(series, RankFrequencySeries):
        pts = np.column_stack([series.ranks, series.freqs])
    else:
        pts = np.asarray(list(series), dtype=np.int64).reshape(-1, 2)
    if pts.shape[0] < 2 or pts[0, 0] != 0 or pts[0, 1] != raw.total_tokens:
        return False
    r, f = pts[1:, 0], pts[1:, 1]
    if r[0] != 1 or f[-1] != 0 or np.any(np.diff(r) <= 0):
        return False
    restored = expand(r, f)
    return restored.shape == raw.frequencies.shape and bool(
        np.array_equal(restored, raw.frequencies)
    )


def raw_from_points(ranks, freqs, tokens=None, total_tokens=None) -> RawRankList:
    """Rebuild a gap-free raw list from raw or pre-compressed TSV rows.

    Accepts an optional zeroth-word row (rank 0) and an optional zero-frequency
    sentinel.  Without a sentinel the last retained point is taken to be a
    single word, unless the ranks are already gap-free.
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    freqs = np.asarray(freqs, dtype=np.int64)
    if ranks.size == 0:
        raise FormatError("no rank-frequency rows")
    order = np.argsort(ranks, kind="stable")
    ranks, freqs = ranks[order], freqs[order]
    if tokens is not None:
        tokens = [tokens[i] for i in order]
    if ranks[0] == 0:
        if total_tokens is None:
            total_tokens = int(freqs[0])
        ranks, freqs = ranks[1:], freqs[1:]
        if tokens is not None:
            tokens = tokens[1:]
    if ranks.size == 0 or ranks[0] != 1:
        raise FormatError("ranks must start at 1")
    if np.any(np.diff(ranks) <= 0):
        raise FormatError("duplicate or unordered ranks")
    zero = freqs == 0
    if zero.any():
        if zero.sum() > 1 or not zero[-1]:
            raise FormatError("a zero frequency is only allowed as the final sentinel row")
        if ranks.size < 2:
            raise FormatError("sentinel without data rows")
        sent = ranks[-1]
    else:
        sent = ranks[-1] + 1
    if np.any(freqs < 0):
        raise FormatError("negative frequency")
    if np.any(np.diff(freqs[~zero]) > 0):
        raise FormatError("frequencies must be non-increasing in rank")
    r = np.concatenate((ranks[~zero], [sent]))
    f = np.concatenate((freqs[~zero], [0]))
    full = expand(r, f)
    gap_free = full.size == int((~zero).sum())
    keep_tokens = tokens is not None and gap_free and any(tokens)
    raw_tokens = tuple(t for t, z in zip(tokens, zero) if not z) if keep_tokens else None
    total = int(full.sum())
    if total_tokens is not None and int(total_tokens) != total:
        raise FormatError(
            f"header total_tokens={total_tokens} disagrees with expanded sum {total}"
        )
    return RawRankList(full, total, raw_tokens)


def load_raw(path) -> RawRankList:
    text = Path(path).read_text(encoding="utf-8")
    ranks, freqs, tokens, total = parse_rank_tsv(text)
    return raw_from_points(ranks, freqs, tokens, total)


def load_series(path) -> RankFrequencySeries:
    return compress(load_raw(path))


def format_series_tsv(series: RankFrequencySeries) -> str:
    lines = [f"#total_tokens={series.total_tokens}"]
    lines += [f"{r}\t{f}" for r, f in series.points]
    return "\n".join(lines) + "\n"


def write_series_tsv(series: RankFrequencySeries, path) -> None:
    Path(path).write_text(format_series_tsv(series), encoding="utf-8")
