"""Hot-loop kernels over token flag arrays.

Tokens are classified once (in Python, see :class:`diachron.tokenizer.TokenClassifier`)
into a uint8 bitmask per token. Everything downstream of classification is pure
integer work and lives here, in two interchangeable implementations:

* ``*_nb``: numba ``@njit(cache=True)`` single-pass loops
* ``*_np``: vectorized numpy

``diachron.backend`` picks the active pair at import time via the
``DIACHRON_BACKEND`` environment variable. Both produce bit-identical results;
``benchmarks/bench_kernels.py`` times them against each other.
"""

from __future__ import annotations

import numpy as np

from .backend import USING_NUMBA

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return decorator


# Token flag bits. F_WORD marks tokens containing at least one letter or digit,
# F_AT marks the literal "@" token, the F_END_* bits record the last character
# after stripping closing quotes/brackets, F_DOT_BLOCKED marks dot-enders that
# are known abbreviations or single uppercase initials, and F_UPPER_START marks
# tokens whose first character is uppercase, a digit, or an opening quote/bracket.
F_WORD = 1
F_AT = 2
F_END_DOT = 4
F_END_BANGQ = 8
F_END_SEMI = 16
F_DOT_BLOCKED = 32
F_UPPER_START = 64


# ----------------------------------------------------------------------------
# sentence boundaries
# ----------------------------------------------------------------------------

def _boundaries_np(flags: np.ndarray, extended: bool) -> np.ndarray:
    """Vectorized boundary resolution.

    Parameters
    ----------
    flags : uint8 array
        Per-token classification bitmask.
    extended : bool
        Whether ``;``/``:`` enders terminate sentences.

    Returns
    -------
    bool array
        True at index i when a sentence ends after token i. The final token
        always closes the last sentence.
    """
    n = flags.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.bool_)
    next_ok = np.empty(n, dtype=np.bool_)
    next_ok[:-1] = (flags[1:] & F_UPPER_START) != 0
    next_ok[-1] = True
    dot = (flags & F_END_DOT) != 0
    blocked = (flags & F_DOT_BLOCKED) != 0
    bangq = (flags & F_END_BANGQ) != 0
    out = (dot & ~blocked & next_ok) | (bangq & next_ok)
    if extended:
        out |= (flags & F_END_SEMI) != 0
    out[-1] = True
    return out


@njit(cache=True)
def _boundaries_nb(flags, extended):
    n = flags.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        f = flags[i]
        if i == n - 1:
            next_ok = True
        else:
            next_ok = (flags[i + 1] & F_UPPER_START) != 0
        hit = False
        if (f & F_END_DOT) != 0 and (f & F_DOT_BLOCKED) == 0 and next_ok:
            hit = True
        if (f & F_END_BANGQ) != 0 and next_ok:
            hit = True
        if extended and (f & F_END_SEMI) != 0:
            hit = True
        out[i] = hit
    if n > 0:
        out[n - 1] = True
    return out


# ----------------------------------------------------------------------------
# per-sentence spans, word counts, redaction runs
# ----------------------------------------------------------------------------

def _segments_np(flags: np.ndarray, bounds: np.ndarray, min_run: int):
    """Slice a boundary mask into sentence spans.

    Returns
    -------
    (starts, ends, word_counts, redacted)
        ``starts``/``ends`` are inclusive token index ranges per sentence,
        ``word_counts`` counts F_WORD tokens per span, ``redacted`` flags
        spans containing a run of at least ``min_run`` consecutive "@" tokens.
    """
    n = flags.shape[0]
    if n == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy(), np.zeros(0, dtype=np.bool_)
    ends = np.flatnonzero(bounds).astype(np.int64)
    starts = np.empty_like(ends)
    starts[0] = 0
    starts[1:] = ends[:-1] + 1
    word = ((flags & F_WORD) != 0).astype(np.int64)
    word_counts = np.add.reduceat(word, starts)
    at = (flags & F_AT) != 0
    idx = np.arange(n, dtype=np.int64)
    last_non_at = np.maximum.accumulate(np.where(~at, idx, -1))
    run_len = np.where(at, idx - last_non_at, 0)
    run_hit = (run_len >= min_run).astype(np.int64)
    redacted = np.add.reduceat(run_hit, starts) > 0
    return starts, ends, word_counts, redacted


@njit(cache=True)
def _segments_nb(flags, bounds, min_run):
    n = flags.shape[0]
    n_sent = 0
    for i in range(n):
        if bounds[i]:
            n_sent += 1
    starts = np.empty(n_sent, dtype=np.int64)
    ends = np.empty(n_sent, dtype=np.int64)
    word_counts = np.zeros(n_sent, dtype=np.int64)
    redacted = np.zeros(n_sent, dtype=np.bool_)
    s = 0
    start = 0
    words = 0
    run = 0
    hit = False
    for i in range(n):
        f = flags[i]
        if (f & F_WORD) != 0:
            words += 1
        if (f & F_AT) != 0:
            run += 1
            if run >= min_run:
                hit = True
        else:
            run = 0
        if bounds[i]:
            starts[s] = start
            ends[s] = i
            word_counts[s] = words
            redacted[s] = hit
            s += 1
            start = i + 1
            words = 0
            hit = False
    return starts, ends, word_counts, redacted


# ----------------------------------------------------------------------------
# windowed token-pattern matching
# ----------------------------------------------------------------------------

def _match_count_np(ids, strip_ids, sid, kept, pat) -> int:
    """Count pattern windows, numpy path.

    ``ids`` holds one integer per token (-1 for out-of-vocabulary),
    ``strip_ids`` the id of the token with trailing punctuation stripped,
    ``sid`` the sentence index per token and ``kept`` a per-sentence keep
    mask. A window matches when every position but the last equals the
    pattern id exactly and the last position equals it either raw or
    stripped, with the whole window inside one kept sentence.
    """
    n = ids.shape[0]
    k = pat.shape[0]
    m = n - k + 1
    if m <= 0:
        return 0
    ok = np.ones(m, dtype=np.bool_)
    for j in range(k - 1):
        ok &= ids[j:j + m] == pat[j]
    last = k - 1
    ok &= (ids[last:last + m] == pat[last]) | (strip_ids[last:last + m] == pat[last])
    ok &= sid[:m] == sid[last:last + m]
    ok &= kept[sid[:m]]
    return int(np.count_nonzero(ok))


@njit(cache=True)
def _match_count_nb(ids, strip_ids, sid, kept, pat):
    n = ids.shape[0]
    k = pat.shape[0]
    count = 0
    for i in range(n - k + 1):
        if sid[i] != sid[i + k - 1]:
            continue
        if not kept[sid[i]]:
            continue
        good = True
        for j in range(k - 1):
            if ids[i + j] != pat[j]:
                good = False
                break
        if not good:
            continue
        last = i + k - 1
        if ids[last] == pat[k - 1] or strip_ids[last] == pat[k - 1]:
            count += 1
    return count


# ----------------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------------

def boundaries(flags: np.ndarray, extended: bool) -> np.ndarray:
    """Mark sentence-final tokens. See :func:`_boundaries_np`."""
    if flags.shape[0] == 0:
        return np.zeros(0, dtype=np.bool_)
    if USING_NUMBA:
        return _boundaries_nb(flags, extended)
    return _boundaries_np(flags, extended)


def segments(flags: np.ndarray, bounds: np.ndarray, min_run: int = 10):
    """Resolve sentence spans plus word/redaction accounting. See :func:`_segments_np`."""
    if flags.shape[0] == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy(), np.zeros(0, dtype=np.bool_)
    if USING_NUMBA:
        return _segments_nb(flags, bounds, min_run)
    return _segments_np(flags, bounds, min_run)


def window_match_count(ids, strip_ids, sid, kept, pat) -> int:
    """Count pattern occurrences within kept sentences. See :func:`_match_count_np`."""
    if ids.shape[0] < pat.shape[0] or pat.shape[0] == 0:
        return 0
    if USING_NUMBA:
        return int(_match_count_nb(ids, strip_ids, sid, kept, pat))
    return _match_count_np(ids, strip_ids, sid, kept, pat)
