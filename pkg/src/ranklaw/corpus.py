"""Tokenization and raw rank-frequency lists.

Words are runs of non-whitespace; characters are single code points with
whitespace kept as tokens.  The resulting counts are turned into a
:class:`RawRankList`, ranked by descending frequency with ties broken by
token order so that ranks are reproducible.
"""

from __future__ import annotations

import io
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CorpusDecodeError, EmptyCorpusError, FormatError

WORD = "word"
CHARACTER = "character"


@dataclass(frozen=True)
class TokenizationConfig:
    unit: str = WORD
    lowercase: bool = False
    strip_punctuation: bool = False
    treat_punct_as_tokens: bool = False
    # corpus-specific cleanup, both off by default: drop whole lines that
    # start with '<' (Europarl-style <CHAPTER>/<SPEAKER>/<P> markup), and
    # drop word tokens made only of digits and number punctuation
    skip_markup_lines: bool = False
    drop_numerals: bool = False

    def __post_init__(self):
        if self.unit not in (WORD, CHARACTER):
            raise ValueError(f"unit must be 'word' or 'character', got {self.unit!r}")
        if self.strip_punctuation and self.treat_punct_as_tokens:
            raise ValueError(
                "strip_punctuation and treat_punct_as_tokens are mutually exclusive"
            )


def is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _split_punct(word: str) -> list[str]:
    # every punctuation character becomes its own token
    out, buf = [], []
    for ch in word:
        if is_punct(ch):
            if buf:
                out.append("".join(buf))
                buf = []
            out.append(ch)
        else:
            buf.append(ch)
    if buf:
        out.append("".join(buf))
    return out


def is_numeral(token: str) -> bool:
    """Digits with optional separators, e.g. ``12``, ``3.``, ``1,000``, ``4:12``."""
    return any(ch.isdigit() for ch in token) and all(
        ch.isdigit() or is_punct(ch) for ch in token
    )


def _drop_markup(text: str) -> str:
    return "\n".join(line for line in text.split("\n") if not line.lstrip().startswith("<"))


def _strip_edges(word: str) -> str:
    lo, hi = 0, len(word)
    while lo < hi and is_punct(word[lo]):
        lo += 1
    while hi > lo and is_punct(word[hi - 1]):
        hi -= 1
    return word[lo:hi]


def iter_tokens(text: str, config: TokenizationConfig = TokenizationConfig()):
    """Yield tokens of `text` one at a time according to `config`."""
    if config.skip_markup_lines:
        text = _drop_markup(text)
    if config.lowercase:
        text = text.lower()
    if config.unit == CHARACTER:
        for ch in text:
            if config.strip_punctuation and is_punct(ch):
                continue
            yield ch
        return
    for word in text.split():
        if config.drop_numerals and is_numeral(word):
            continue
        if config.strip_punctuation:
            word = _strip_edges(word)
            if word:
                yield word
        elif config.treat_punct_as_tokens:
            yield from _split_punct(word)
        else:
            yield word


def tokenize(text: str, config: TokenizationConfig = TokenizationConfig()) -> Counter:
    """Count the tokens of `text`.

    >>> sorted(tokenize("The the cat.", TokenizationConfig(lowercase=True,
    ...                                                     strip_punctuation=True)).items())
    [('cat', 1), ('the', 2)]
    """
    return Counter(iter_tokens(text, config))


def decode(data: bytes, encoding: str = "utf-8") -> str:
    try:
        return data.decode(encoding)
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(encoding, exc.start, exc.reason) from None


def count_file(
    path, config: TokenizationConfig = TokenizationConfig(), encoding: str = "utf-8"
) -> Counter:
    return tokenize(decode(Path(path).read_bytes(), encoding), config)


def merge_counts(parts: Iterable[Counter]) -> Counter:
    """Merge per-shard counts; order of `parts` does not matter."""
    total = Counter()
    for part in parts:
        total.update(part)
    return total


@dataclass(frozen=True, eq=False)
class RawRankList:
    """Gap-free descending rank-frequency list.

    Ranks are implicit: ``frequencies[k-1]`` is the frequency of rank ``k``.
    """

    frequencies: np.ndarray
    total_tokens: int
    tokens: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.int64)
        object.__setattr__(self, "frequencies", freqs)
        if freqs.ndim != 1 or freqs.size == 0:
            raise EmptyCorpusError("rank list is empty")
        if np.any(freqs <= 0):
            raise FormatError("raw frequencies must be positive")
        if np.any(np.diff(freqs) > 0):
            raise FormatError("raw frequencies must be non-increasing in rank")
        if int(freqs.sum()) != self.total_tokens:
            raise FormatError(
                f"total_tokens={self.total_tokens} but frequencies sum to {int(freqs.sum())}"
            )
        if self.tokens is not None and len(self.tokens) != freqs.size:
            raise FormatError("token column length does not match frequencies")

    def __eq__(self, other):
        if not isinstance(other, RawRankList):
            return NotImplemented
        return self.total_tokens == other.total_tokens and np.array_equal(
            self.frequencies, other.frequencies
        )

    __hash__ = None

    @property
    def vocab_size(self) -> int:
        return int(self.frequencies.size)

    @property
    def ranks(self) -> np.ndarray:
        return np.arange(1, self.vocab_size + 1, dtype=np.int64)

    @property
    def entries(self) -> list[tuple[int, int]]:
        return [(k + 1, int(f)) for k, f in enumerate(self.frequencies)]

    @classmethod
    def from_frequencies(cls, freqs: Sequence[int], tokens=None) -> "RawRankList":
        freqs = np.asarray(freqs, dtype=np.int64)
        return cls(freqs, int(freqs.sum()), None if tokens is None else tuple(tokens))


def build_rank_list(counts) -> RawRankList:
    """Rank a token multiset by descending frequency.

    Ties are broken by lexicographic token order.
    """
    items = [(tok, int(c)) for tok, c in dict(counts).items() if c > 0]
    if not items:
        raise EmptyCorpusError("corpus contains no tokens")
    items.sort(key=lambda kv: (-kv[1], kv[0]))
    tokens = tuple(tok for tok, _ in items)
    return RawRankList.from_frequencies([c for _, c in items], tokens)


def _escape(token: str) -> str:
    return token.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _unescape(token: str) -> str:
    out, i = [], 0
    while i < len(token):
        ch = token[i]
        if ch == "\\" and i + 1 < len(token):
            nxt = token[i + 1]
            out.append({"t": "\t", "n": "\n", "r": "\r", "\\": "\\"}.get(nxt, "\\" + nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def format_rank_tsv(raw: RawRankList) -> str:
    """Render `raw` as ``rank<TAB>frequency<TAB>token`` lines with a total header.

    Tab, newline and backslash inside tokens are backslash-escaped so that
    whitespace characters survive a round trip.
    """
    buf = io.StringIO()
    buf.write(f"#total_tokens={raw.total_tokens}\n")
    tokens = raw.tokens or ("",) * raw.vocab_size
    for k, (f, tok) in enumerate(zip(raw.frequencies, tokens), start=1):
        buf.write(f"{k}\t{int(f)}\t{_escape(tok)}\n")
    return buf.getvalue()


def write_rank_tsv(raw: RawRankList, path) -> None:
    Path(path).write_text(format_rank_tsv(raw), encoding="utf-8")


def parse_rank_tsv(text: str):
    """Parse rank-frequency TSV text.

    Returns ``(ranks, freqs, tokens, total_tokens)`` without any validation of
    ordering; ``total_tokens`` is None when the header is absent.  Lines
    starting with ``#`` other than the total header are comments.
    """
    ranks, freqs, tokens = [], [], []
    total = None
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key.strip() == "total_tokens":
                try:
                    total = int(value.strip())
                except ValueError:
                    raise FormatError(f"line {lineno}: bad total_tokens header") from None
            continue
        cols = line.split("\t")
        if len(cols) < 2:
            raise FormatError(f"line {lineno}: expected rank<TAB>frequency[<TAB>token]")
        try:
            ranks.append(int(cols[0]))
            freqs.append(int(cols[1]))
        except ValueError:
            raise FormatError(f"line {lineno}: rank and frequency must be integers") from None
        tokens.append(_unescape(cols[2]) if len(cols) > 2 else "")
    return ranks, freqs, tokens, total
