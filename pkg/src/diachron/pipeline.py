"""Corpus-level orchestration: map per-document work, reduce into cells.

Each document is processed independently (optionally in a process pool) into
small integer partials; reduction merges those with commutative operations
only, so results are identical for any worker count or completion order.
"""

from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .analytics import GroupKey, LengthHistogram
from .errors import EmptyCorpus
from .frequency import TokenPattern, map_pattern_ids
from .ingest import DocumentRef, Genre, load_document
from .kernels import F_WORD
from .tokenizer import (
    REDACTION_RUN_LENGTH,
    AbbreviationSet,
    DelimiterMode,
    TokenClassifier,
)

logger = logging.getLogger("diachron.pipeline")


@dataclass(frozen=True)
class PipelineConfig:
    """Picklable bundle of everything a worker needs."""

    tags: tuple[str, ...]
    abbrev_tokens: frozenset[str]
    modes: tuple[str, ...]
    min_words: int
    patterns: tuple[TokenPattern, ...] = ()


@dataclass
class ModeResult:
    emitted: int
    removed_redacted: int
    removed_short: int
    kept_words: int
    length_counts: np.ndarray
    matches: tuple[int, ...] = ()


@dataclass
class DocResult:
    decade: int
    genre_label: str
    genre_known: bool
    raw_words: int = 0
    decode_errors: int = 0
    skipped: bool = False
    modes: dict[str, ModeResult] = field(default_factory=dict)


def process_document(ref: DocumentRef, cfg: PipelineConfig, classifier: TokenClassifier) -> DocResult:
    """Tokenize one document and compute all per-mode partial statistics."""
    out = DocResult(decade=ref.decade, genre_label=ref.genre.label, genre_known=ref.genre.known)
    try:
        text, decode_errors = load_document(ref.path, cfg.tags)
    except OSError as exc:
        logger.warning("skipping unreadable file %s: %s", ref.path, exc)
        out.skipped = True
        return out
    out.decode_errors = decode_errors
    tokens = text.split()
    flags = classifier.classify(tokens)
    out.raw_words = int(np.count_nonzero(flags & F_WORD))
    pattern_ids = None
    if cfg.patterns and tokens:
        pattern_ids = [map_pattern_ids(tokens, p) for p in cfg.patterns]
    for mode_name in cfg.modes:
        mode = DelimiterMode(mode_name)
        bounds = kernels.boundaries(flags, mode.extended)
        starts, ends, word_counts, redacted = kernels.segments(flags, bounds, REDACTION_RUN_LENGTH)
        kept_mask = ~redacted & (word_counts >= cfg.min_words)
        kept_lengths = word_counts[kept_mask]
        matches: tuple[int, ...] = ()
        if pattern_ids is not None:
            sid = np.searchsorted(ends, np.arange(len(tokens), dtype=np.int64), side="left")
            matches = tuple(
                kernels.window_match_count(ids, strip_ids, sid, kept_mask, pat)
                for ids, strip_ids, pat in pattern_ids
            )
        elif cfg.patterns:
            matches = tuple(0 for _ in cfg.patterns)
        out.modes[mode_name] = ModeResult(
            emitted=int(word_counts.shape[0]),
            removed_redacted=int(np.count_nonzero(redacted)),
            removed_short=int(np.count_nonzero(~redacted & (word_counts < cfg.min_words))),
            kept_words=int(kept_lengths.sum()),
            length_counts=np.bincount(kept_lengths),
            matches=matches,
        )
    return out


# Per-process worker state (built once by the pool initializer).
_worker_cfg: PipelineConfig | None = None
_worker_classifier: TokenClassifier | None = None


def _init_worker(cfg: PipelineConfig) -> None:
    global _worker_cfg, _worker_classifier
    _worker_cfg = cfg
    _worker_classifier = TokenClassifier(AbbreviationSet(cfg.abbrev_tokens))


def _run_worker(ref: DocumentRef) -> DocResult:
    assert _worker_cfg is not None and _worker_classifier is not None
    return process_document(ref, _worker_cfg, _worker_classifier)


@dataclass
class CellStats:
    hist: LengthHistogram = field(default_factory=LengthHistogram)
    kept_words: int = 0
    raw_words: int = 0
    emitted: int = 0
    removed_redacted: int = 0
    removed_short: int = 0
    matches: list[int] = field(default_factory=list)


@dataclass
class FilterTotals:
    sentences_emitted: int = 0
    sentences_kept: int = 0
    removed_redacted: int = 0
    removed_short: int = 0


@dataclass
class RunReport:
    files_processed: int = 0
    files_skipped: int = 0
    decode_errors: int = 0
    modes: dict[str, FilterTotals] = field(default_factory=dict)


@dataclass
class PipelineResult:
    """Reduced per-mode cells plus run accounting."""

    cells: dict[str, dict[GroupKey, CellStats]]
    report: RunReport


def _reduce(results, cfg: PipelineConfig) -> PipelineResult:
    n_patterns = len(cfg.patterns)
    cells: dict[str, dict[GroupKey, CellStats]] = {m: {} for m in cfg.modes}
    report = RunReport(modes={m: FilterTotals() for m in cfg.modes})
    for res in results:
        if res.skipped:
            report.files_skipped += 1
            continue
        report.files_processed += 1
        report.decode_errors += res.decode_errors
        key = GroupKey(decade=res.decade, genre=Genre(res.genre_label, res.genre_known))
        for mode_name, mres in res.modes.items():
            cell = cells[mode_name].get(key)
            if cell is None:
                cell = cells[mode_name][key] = CellStats(matches=[0] * n_patterns)
            cell.hist.update_from_bincount(mres.length_counts)
            cell.kept_words += mres.kept_words
            cell.raw_words += res.raw_words
            cell.emitted += mres.emitted
            cell.removed_redacted += mres.removed_redacted
            cell.removed_short += mres.removed_short
            for i, c in enumerate(mres.matches):
                cell.matches[i] += c
            totals = report.modes[mode_name]
            totals.sentences_emitted += mres.emitted
            totals.sentences_kept += int(mres.length_counts.sum())
            totals.removed_redacted += mres.removed_redacted
            totals.removed_short += mres.removed_short
    return PipelineResult(cells=cells, report=report)


def run_pipeline(refs: list[DocumentRef], cfg: PipelineConfig, jobs: int = 1) -> PipelineResult:
    """Process every document and reduce. jobs=1 runs inline, >1 forks a pool."""
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if not refs:
        raise EmptyCorpus("no documents to process")
    if jobs == 1 or len(refs) == 1:
        classifier = TokenClassifier(AbbreviationSet(cfg.abbrev_tokens))
        results = (process_document(r, cfg, classifier) for r in refs)
        return _reduce(results, cfg)
    chunk = max(1, len(refs) // (jobs * 4))
    with multiprocessing.Pool(processes=jobs, initializer=_init_worker, initargs=(cfg,)) as pool:
        return _reduce(pool.imap_unordered(_run_worker, refs, chunksize=chunk), cfg)
