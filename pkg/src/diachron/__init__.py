"""diachron: sentence-length and construction-frequency statistics for
decade/genre corpus trees (COHA-style layouts).

The package splits whitespace-tokenized text into sentences with a
rule-based boundary detector, aggregates exact length histograms per
(decade, genre) cell, normalizes token-pattern counts per million words,
and ships a seeded synthetic-corpus generator whose manifest doubles as a
ground-truth oracle for the whole pipeline.
"""

from .analytics import (
    DistributionSummary,
    GroupKey,
    LengthHistogram,
    bucket_share,
    group_stats,
    merge,
    summarize,
)
from .errors import (
    ConfigError,
    DiachronError,
    EmptyCorpus,
    EmptyHistogram,
    InvalidRange,
    MalformedFilename,
    NonPositiveLength,
    UndefinedRate,
)
from .frequency import FrequencySeries, FreqRow, TokenPattern, build_series, count_matches, per_million
from .generator import GeneratorSpec, generate_corpus, load_manifest
from .ingest import (
    DEFAULT_PREFIX_MAP,
    DEFAULT_TAGS,
    DocumentRef,
    Genre,
    format_filename,
    load_document,
    load_reclassification,
    parse_filename,
    scan_corpus,
    strip_tags,
)
from .pipeline import PipelineConfig, PipelineResult, run_pipeline
from .tokenizer import (
    AbbreviationSet,
    DelimiterMode,
    FilterReport,
    Sentence,
    contains_redaction_run,
    default_abbreviations,
    filter_sentences,
    tokenize_sentences,
    word_count,
)

__version__ = "0.1.0"
