"""Exact sentence-length histograms and box-plot style summaries.

Histograms store integer counts keyed by length, so merging partial results
from any number of workers is exact and order-independent. Quantiles follow
the Tukey hinge convention: with n observations the median sits at depth
(n + 1) / 2 and the hinges at depth (floor((n + 1) / 2) + 1) / 2 from each
end, interpolating halfway when a depth falls between two order statistics.
Whiskers extend to the most extreme data values within 1.5 IQR of the hinges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptyHistogram, InvalidRange, NonPositiveLength
from .ingest import Genre

__all__ = [
    "DistributionSummary",
    "GroupKey",
    "LengthHistogram",
    "bucket_share",
    "group_stats",
    "merge",
    "summarize",
]


@dataclass(frozen=True, order=True)
class GroupKey:
    """A (decade, genre) cell."""

    decade: int
    genre: Genre


class LengthHistogram:
    """Exact counts of sentence lengths (positive integers)."""

    __slots__ = ("counts", "n", "total_words")

    def __init__(self, counts: Mapping[int, int] | None = None):
        self.counts: dict[int, int] = {}
        self.n = 0
        self.total_words = 0
        if counts:
            for length, c in counts.items():
                self._bump(length, c)

    def _bump(self, length: int, c: int) -> None:
        length = int(length)
        c = int(c)
        if length < 1:
            raise NonPositiveLength(f"sentence length must be >= 1, got {length}")
        if c < 0:
            raise ValueError(f"negative count for length {length}")
        if c == 0:
            return
        self.counts[length] = self.counts.get(length, 0) + c
        self.n += c
        self.total_words += length * c

    def add(self, length: int, count: int = 1) -> "LengthHistogram":
        """Record one (or ``count``) sentences of the given length."""
        self._bump(length, count)
        return self

    # accumulate is the operation name used throughout the docs
    accumulate = add

    def update(self, other: "LengthHistogram") -> "LengthHistogram":
        """Fold another histogram into this one in place."""
        for length, c in other.counts.items():
            self._bump(length, c)
        return self

    def update_from_bincount(self, arr: np.ndarray) -> "LengthHistogram":
        """Fold a ``np.bincount`` array (index = length) into this histogram."""
        for length in np.flatnonzero(arr):
            self._bump(int(length), int(arr[length]))
        return self

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "LengthHistogram":
        h = cls()
        for length in lengths:
            h._bump(int(length), 1)
        return h

    def merge(self, other: "LengthHistogram") -> "LengthHistogram":
        """Return a new histogram holding the union of both counts."""
        out = LengthHistogram()
        out.update(self)
        out.update(other)
        return out

    def sorted_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(values, counts) with values ascending."""
        vals = np.array(sorted(self.counts), dtype=np.int64)
        cnts = np.array([self.counts[int(v)] for v in vals], dtype=np.int64)
        return vals, cnts

    def __eq__(self, other) -> bool:
        return isinstance(other, LengthHistogram) and self.counts == other.counts

    def __repr__(self) -> str:
        return f"LengthHistogram(n={self.n}, total_words={self.total_words})"


def merge(a: LengthHistogram, b: LengthHistogram) -> LengthHistogram:
    """Commutative, associative merge of two histograms."""
    return a.merge(b)


@dataclass(frozen=True)
class DistributionSummary:
    n: int
    mean: float
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    min: int
    max: int


def summarize(hist: LengthHistogram) -> DistributionSummary:
    """Box-plot summary of a histogram; raises EmptyHistogram for n == 0."""
    if hist.n == 0:
        raise EmptyHistogram("cannot summarize an empty histogram")
    vals, cnts = hist.sorted_arrays()
    cum = np.cumsum(cnts)
    n = hist.n

    def order_stat(rank: int) -> int:
        # rank is 1-based; first value whose cumulative count reaches it
        return int(vals[int(np.searchsorted(cum, rank, side="left"))])

    def at_depth(depth: float) -> float:
        lo = math.floor(depth)
        hi = math.ceil(depth)
        if lo == hi:
            return float(order_stat(lo))
        return (order_stat(lo) + order_stat(hi)) / 2

    median_depth = (n + 1) / 2
    hinge_depth = (math.floor(median_depth) + 1) / 2
    median = at_depth(median_depth)
    q1 = at_depth(hinge_depth)
    q3 = at_depth(n + 1 - hinge_depth)
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    whisker_low = float(vals[int(np.searchsorted(vals, lo_fence, side="left"))])
    whisker_high = float(vals[int(np.searchsorted(vals, hi_fence, side="right")) - 1])
    return DistributionSummary(
        n=n,
        mean=hist.total_words / n,
        median=median,
        q1=q1,
        q3=q3,
        whisker_low=whisker_low,
        whisker_high=whisker_high,
        min=int(vals[0]),
        max=int(vals[-1]),
    )


def bucket_share(hist: LengthHistogram, lo: int, hi: int) -> float:
    """Fraction of sentences with lo <= length <= hi."""
    if not (1 <= lo <= hi):
        raise InvalidRange(f"need 1 <= lo <= hi, got lo={lo} hi={hi}")
    if hist.n == 0:
        raise EmptyHistogram("bucket share of an empty histogram")
    hit = sum(c for length, c in hist.counts.items() if lo <= length <= hi)
    return hit / hist.n


def group_stats(sentences: Iterable) -> dict[GroupKey, LengthHistogram]:
    """Aggregate kept sentences into per-(decade, genre) histograms.

    Every sentence must carry its source DocumentRef; feed this the output
    of filter_sentences so lengths are already positive.
    """
    cells: dict[GroupKey, LengthHistogram] = {}
    for s in sentences:
        if s.doc is None:
            raise ValueError("group_stats needs sentences with a source document")
        key = GroupKey(decade=s.doc.decade, genre=s.doc.genre)
        hist = cells.get(key)
        if hist is None:
            hist = cells[key] = LengthHistogram()
        hist.add(s.word_count)
    return cells
