"""Rule-based sentence segmentation over whitespace-split tokens.

Text is split on whitespace; a sentence boundary falls after token T when

a. T ends with an active delimiter, optionally followed by closing quotes
   or brackets (``"`` ``'`` ``”`` ``’`` ``)`` ``]``);
b. T is not a listed abbreviation (case-sensitive, checked after stripping
   the closers);
c. T is not a single uppercase initial such as ``T.``;
d. the next token starts with an uppercase letter, an opening quote or
   bracket, or a digit, or T is the last token.

Rule (d) gates ``.``/``!``/``?`` (and a token-final ellipsis ``…``, which is
treated as a period). In extended mode ``;`` and ``:`` end a sentence on rule
(a) alone: rules (b) and (c) cannot apply to them and the following token is
deliberately not inspected, so clause-level splits fire even before lowercase
text. Standalone punctuation tokens (for example a detached `` .``) behave
exactly like attached ones. The final token always closes the last sentence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .ingest import DocumentRef
from .kernels import (
    F_AT,
    F_DOT_BLOCKED,
    F_END_BANGQ,
    F_END_DOT,
    F_END_SEMI,
    F_UPPER_START,
    F_WORD,
)

STANDARD_DELIMITERS = frozenset(".!?")
EXTENDED_DELIMITERS = frozenset(".!?;:")

REDACTION_RUN_LENGTH = 10
DEFAULT_MIN_WORDS = 2

_CLOSERS = frozenset("\"'”’)]")
_OPENERS = frozenset("\"'“‘([")


class DelimiterMode(enum.Enum):
    STANDARD = "standard"
    EXTENDED = "extended"

    @property
    def extended(self) -> bool:
        return self is DelimiterMode.EXTENDED

    @property
    def delimiters(self) -> frozenset[str]:
        return EXTENDED_DELIMITERS if self.extended else STANDARD_DELIMITERS

    @classmethod
    def from_name(cls, name: str) -> "DelimiterMode":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"delimiter mode must be 'standard' or 'extended', got {name!r}") from None


class AbbreviationSet:
    """Immutable set of abbreviation tokens; every member ends with a period."""

    __slots__ = ("_tokens",)

    def __init__(self, tokens: Iterable[str]):
        toks = frozenset(tokens)
        for t in toks:
            if not t.endswith("."):
                raise ValueError(f"abbreviation must end with '.': {t!r}")
            if len(t) < 2 or any(c.isspace() for c in t):
                raise ValueError(f"not a usable abbreviation token: {t!r}")
        self._tokens = toks

    def __contains__(self, token: str) -> bool:
        return token in self._tokens

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._tokens))

    def __len__(self) -> int:
        return len(self._tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, AbbreviationSet) and self._tokens == other._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    @property
    def tokens(self) -> frozenset[str]:
        return self._tokens

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "AbbreviationSet":
        toks = []
        for line in lines:
            entry = line.split("#", 1)[0].strip()
            if entry:
                toks.append(entry)
        return cls(toks)

    @classmethod
    def from_file(cls, path: Path) -> "AbbreviationSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


_DEFAULT_ABBREVS: AbbreviationSet | None = None


def default_abbreviations() -> AbbreviationSet:
    """The bundled abbreviation inventory (loaded once)."""
    global _DEFAULT_ABBREVS
    if _DEFAULT_ABBREVS is None:
        text = resources.files("diachron.data").joinpath("abbreviations.txt").read_text("utf-8")
        _DEFAULT_ABBREVS = AbbreviationSet.from_lines(text.splitlines())
    return _DEFAULT_ABBREVS


def _has_alnum(token: str) -> bool:
    return any(c.isalnum() for c in token)


def word_count(tokens: Sequence[str]) -> int:
    """Number of tokens containing at least one letter or digit."""
    return sum(1 for t in tokens if _has_alnum(t))


def contains_redaction_run(tokens: Sequence[str], run_length: int = REDACTION_RUN_LENGTH) -> bool:
    """True when the tokens contain >= run_length consecutive "@" tokens."""
    run = 0
    for t in tokens:
        if t == "@":
            run += 1
            if run >= run_length:
                return True
        else:
            run = 0
    return False


class TokenClassifier:
    """Computes the per-token flag bitmask consumed by the kernels.

    Classification is memoized per distinct token string, which makes the
    cost sublinear on natural text. One classifier instance should live per
    worker process.
    """

    __slots__ = ("abbrevs", "_cache")

    def __init__(self, abbrevs: AbbreviationSet | None = None):
        self.abbrevs = abbrevs if abbrevs is not None else default_abbreviations()
        self._cache: dict[str, int] = {}

    def _flags(self, t: str) -> int:
        f = 0
        c0 = t[0]
        if c0.isupper() or c0.isdigit() or c0 in _OPENERS:
            f |= F_UPPER_START
        if c0.isalnum() or _has_alnum(t):
            f |= F_WORD
        if t == "@":
            f |= F_AT
        j = len(t) - 1
        while j >= 0 and t[j] in _CLOSERS:
            j -= 1
        if j >= 0:
            last = t[j]
            if last in "!?":
                f |= F_END_BANGQ
            elif last in ";:":
                f |= F_END_SEMI
            elif last == "." or last == "…":
                f |= F_END_DOT
                core = t[: j + 1]
                if core in self.abbrevs:
                    f |= F_DOT_BLOCKED
                elif last == "." and j == 1 and t[0].isalpha() and t[0].isupper():
                    f |= F_DOT_BLOCKED
        return f

    def classify(self, tokens: Sequence[str]) -> np.ndarray:
        cache = self._cache
        buf = bytearray(len(tokens))
        flags = self._flags
        for i, t in enumerate(tokens):
            v = cache.get(t)
            if v is None:
                v = flags(t)
                cache[t] = v
            buf[i] = v
        return np.frombuffer(bytes(buf), dtype=np.uint8)


@dataclass
class Sentence:
    """One segmented sentence: its tokens, word count, and source document."""

    tokens: list[str]
    word_count: int
    doc: DocumentRef | None = None


@dataclass
class Segments:
    """Array view of a segmented token stream (fast path for the pipeline)."""

    starts: np.ndarray
    ends: np.ndarray
    word_counts: np.ndarray
    redacted: np.ndarray

    def __len__(self) -> int:
        return int(self.starts.shape[0])


def segment_tokens(
    tokens: Sequence[str],
    classifier: TokenClassifier,
    mode: DelimiterMode = DelimiterMode.STANDARD,
) -> Segments:
    """Classify tokens and resolve sentence spans without materializing lists."""
    flags = classifier.classify(tokens)
    bounds = kernels.boundaries(flags, mode.extended)
    starts, ends, counts, redacted = kernels.segments(flags, bounds, REDACTION_RUN_LENGTH)
    return Segments(starts=starts, ends=ends, word_counts=counts, redacted=redacted)


def tokenize_sentences(
    text: str,
    mode: DelimiterMode = DelimiterMode.STANDARD,
    abbrevs: AbbreviationSet | None = None,
    doc: DocumentRef | None = None,
) -> list[Sentence]:
    """Split text into sentences under the module's boundary rule."""
    tokens = text.split()
    if not tokens:
        return []
    segs = segment_tokens(tokens, TokenClassifier(abbrevs), mode)
    out = []
    for i in range(len(segs)):
        s, e = int(segs.starts[i]), int(segs.ends[i])
        out.append(Sentence(tokens=tokens[s:e + 1], word_count=int(segs.word_counts[i]), doc=doc))
    return out


@dataclass
class FilterReport:
    """Counts of sentences dropped by each filter stage."""

    removed_redacted: int = 0
    removed_short: int = 0


def filter_sentences(
    sentences: Iterable[Sentence],
    min_words: int = DEFAULT_MIN_WORDS,
    run_length: int = REDACTION_RUN_LENGTH,
) -> tuple[list[Sentence], FilterReport]:
    """Drop redacted sentences, then sentences under the word minimum.

    Order matters for the report: a sentence that is both redacted and short
    counts once, as redacted.
    """
    if min_words < 1:
        raise ValueError(f"min_words must be >= 1, got {min_words}")
    kept: list[Sentence] = []
    report = FilterReport()
    for s in sentences:
        if contains_redaction_run(s.tokens, run_length):
            report.removed_redacted += 1
        elif s.word_count < min_words:
            report.removed_short += 1
        else:
            kept.append(s)
    return kept, report
