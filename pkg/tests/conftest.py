"""Shared fixtures: one small generated corpus reused across test modules."""

import pytest

from diachron import GeneratorSpec, generate_corpus

SMALL_SPEC = GeneratorSpec(
    seed=7,
    decades=(1810, 1900, 2000),
    genres=("fiction", "magazine"),
    docs_per_cell=3,
    sentences_per_cell=60,
    mean_start=12.0,
    mean_end=8.0,
    semicolon_rate=0.10,
    redaction_rate=0.05,
    short_rate=0.05,
    tag_rate=0.20,
    inject_pattern="in order to",
    inject_per_cell=2,
)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """(corpus_dir, manifest) for SMALL_SPEC. Treat the tree as read-only."""
    root = tmp_path_factory.mktemp("corpus") / "small"
    manifest = generate_corpus(SMALL_SPEC, root)
    return root, manifest
