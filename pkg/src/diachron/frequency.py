"""Token-pattern counting and per-million-words normalization.

Patterns are fixed token sequences matched over whitespace tokens. Interior
pattern positions must match a token exactly; the final position also matches
when the token only differs by trailing punctuation ("order to," matches the
pattern token "to"). Matching is case-insensitive by default via casefold.
Overlapping occurrences all count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import UndefinedRate

PER_MILLION = 1_000_000.0


def strip_trailing_punct(token: str) -> str:
    """Drop trailing characters that are neither letters nor digits."""
    while token and not token[-1].isalnum():
        token = token[:-1]
    return token


@dataclass(frozen=True)
class TokenPattern:
    """A fixed sequence of tokens to count, e.g. ("in", "order", "to")."""

    tokens: tuple[str, ...]
    case_sensitive: bool = False

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("pattern needs at least one token")
        for t in self.tokens:
            if not t or any(c.isspace() for c in t):
                raise ValueError(f"pattern token must be non-empty and spaceless: {t!r}")

    @classmethod
    def parse(cls, text: str, case_sensitive: bool = False) -> "TokenPattern":
        toks = tuple(text.split())
        if not toks:
            raise ValueError(f"empty pattern: {text!r}")
        return cls(tokens=toks, case_sensitive=case_sensitive)

    @property
    def display(self) -> str:
        return " ".join(self.tokens)

    def fold(self, s: str) -> str:
        return s if self.case_sensitive else s.casefold()


def map_pattern_ids(
    tokens: Sequence[str], pattern: TokenPattern
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Intern pattern tokens and map the text onto their ids.

    Returns (ids, strip_ids, pat): per-token id arrays (-1 when the token is
    not a pattern token) and the pattern as an id sequence. ``strip_ids``
    uses the trailing-punctuation-stripped form of each token.
    """
    index: dict[str, int] = {}
    pat = np.empty(len(pattern.tokens), dtype=np.int64)
    for j, p in enumerate(pattern.fold(t) for t in pattern.tokens):
        pat[j] = index.setdefault(p, len(index))
    n = len(tokens)
    ids = np.empty(n, dtype=np.int64)
    strip_ids = np.empty(n, dtype=np.int64)
    get = index.get
    fold = pattern.fold
    for i, raw in enumerate(tokens):
        t = fold(raw)
        ids[i] = get(t, -1)
        st = strip_trailing_punct(t)
        strip_ids[i] = ids[i] if st == t else get(st, -1)
    return ids, strip_ids, pat


def count_matches(tokens: Sequence[str], pattern: TokenPattern) -> int:
    """Occurrences of the pattern in one token sequence (overlaps count)."""
    if len(tokens) < len(pattern.tokens):
        return 0
    ids, strip_ids, pat = map_pattern_ids(tokens, pattern)
    sid = np.zeros(len(tokens), dtype=np.int64)
    kept = np.ones(1, dtype=np.bool_)
    return kernels.window_match_count(ids, strip_ids, sid, kept, pat)


def per_million(count: int, word_total: int) -> float:
    """Rate per million words; 0/0 is 0.0, nonzero/0 raises UndefinedRate."""
    if count < 0 or word_total < 0:
        raise ValueError("counts must be non-negative")
    if word_total == 0:
        if count == 0:
            return 0.0
        raise UndefinedRate(f"{count} matches in zero words")
    return count / word_total * PER_MILLION


@dataclass(frozen=True)
class FreqRow:
    decade: int
    genre: str
    match_count: int
    word_total: int
    per_million: float


@dataclass
class FrequencySeries:
    """Normalized frequency of one pattern across (decade, genre) cells."""

    pattern: str
    rows: list[FreqRow]


def build_series(
    pattern: TokenPattern,
    cell_counts: dict[tuple[int, str], tuple[int, int]],
    group_by_genre: bool = True,
) -> FrequencySeries:
    """Assemble a FrequencySeries from per-cell (match_count, word_total).

    Adds one corpus-wide row per decade under the pseudo-genre "all"; rows
    are sorted by (decade, genre).
    """
    rows: list[FreqRow] = []
    decades = sorted({d for d, _ in cell_counts})
    for decade in decades:
        total_c = 0
        total_w = 0
        for (d, genre), (c, w) in cell_counts.items():
            if d != decade:
                continue
            total_c += c
            total_w += w
            if group_by_genre:
                rows.append(FreqRow(decade=d, genre=genre, match_count=c,
                                    word_total=w, per_million=per_million(c, w)))
        rows.append(FreqRow(decade=decade, genre="all", match_count=total_c,
                            word_total=total_w, per_million=per_million(total_c, total_w)))
    rows.sort(key=lambda r: (r.decade, r.genre))
    return FrequencySeries(pattern=pattern.display, rows=rows)
