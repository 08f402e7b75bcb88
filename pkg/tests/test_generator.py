"""Generator ground truth checked against the analysis pipeline (dual route).

The manifest is computed from raw per-sentence lengths with plain list
arithmetic inside the generator. These tests re-derive every figure through
the full scan/tokenize/filter/histogram pipeline and require exact agreement.
"""

import json
import math
from pathlib import Path

import pytest

from diachron import (
    DEFAULT_TAGS,
    DelimiterMode,
    GeneratorSpec,
    Genre,
    GroupKey,
    PipelineConfig,
    TokenPattern,
    default_abbreviations,
    filter_sentences,
    generate_corpus,
    load_document,
    load_manifest,
    load_reclassification,
    per_million,
    run_pipeline,
    scan_corpus,
    summarize,
    tokenize_sentences,
)
from diachron.generator import _list_stats, _make_vocab, _target_means
from conftest import SMALL_SPEC

import numpy as np


def _pipeline(corpus_dir: Path, manifest: dict, jobs: int = 1):
    refs, report = scan_corpus(corpus_dir)
    assert not report.malformed and not report.folder_mismatches
    cfg = PipelineConfig(
        tags=DEFAULT_TAGS,
        abbrev_tokens=default_abbreviations().tokens,
        modes=("standard", "extended"),
        min_words=2,
        patterns=(TokenPattern.parse(manifest["pattern"]),),
    )
    return run_pipeline(refs, cfg, jobs=jobs)


def test_same_spec_same_bytes(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    generate_corpus(SMALL_SPEC, a)
    generate_corpus(SMALL_SPEC, b)
    names_a = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    names_b = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    assert names_a == names_b and names_a
    for rel in names_a:
        assert (a / rel).read_bytes() == (b / rel).read_bytes(), rel


def test_manifest_matches_pipeline(small_corpus):
    corpus_dir, manifest = small_corpus
    result = _pipeline(corpus_dir, manifest)
    std = result.cells["standard"]
    ext = result.cells["extended"]
    assert len(std) == len(manifest["cells"])
    for cell in manifest["cells"]:
        key = GroupKey(decade=cell["decade"], genre=Genre(cell["genre"]))
        s = std[key]
        assert s.emitted == cell["sentences"]
        assert s.hist.n == cell["kept"]
        assert s.removed_redacted == cell["redacted"]
        assert s.removed_short == cell["short"]
        assert s.kept_words == cell["words_kept"]
        assert s.raw_words == cell["words_all"]
        assert s.matches[0] == cell["pattern_count"]
        box = summarize(s.hist)
        assert box.mean == cell["mean"]
        assert box.median == cell["median"]
        assert box.q1 == cell["q1"]
        assert box.q3 == cell["q3"]
        assert box.min == cell["min"]
        assert box.max == cell["max"]
        assert per_million(s.matches[0], s.kept_words) == cell["per_million_kept"]
        e = ext[key]
        assert e.hist.n == cell["extended_kept"]
        assert e.emitted == cell["sentences"] + cell["semicolons"]
        assert e.matches[0] == cell["pattern_count"]
    totals = manifest["totals"]
    rep = result.report.modes["standard"]
    assert rep.sentences_emitted == totals["sentences"]
    assert rep.sentences_kept == totals["kept"]
    assert result.report.decode_errors == 0
    assert result.report.files_processed == totals["files"]


def test_manifest_file_rows_match_direct_tokenization(small_corpus):
    corpus_dir, manifest = small_corpus
    for row in manifest["files"][:6]:
        text, bad = load_document(corpus_dir / row["path"])
        assert bad == 0
        sentences = tokenize_sentences(text, DelimiterMode.STANDARD)
        assert len(sentences) == row["sentences"]
        assert sum(s.word_count for s in sentences) == row["words"]
        kept, _ = filter_sentences(sentences)
        assert len(kept) == row["kept_sentences"]


def test_pipeline_jobs_do_not_change_results(small_corpus):
    corpus_dir, manifest = small_corpus
    one = _pipeline(corpus_dir, manifest, jobs=1)
    four = _pipeline(corpus_dir, manifest, jobs=4)
    for mode in ("standard", "extended"):
        assert set(one.cells[mode]) == set(four.cells[mode])
        for key, a in one.cells[mode].items():
            b = four.cells[mode][key]
            assert a.hist == b.hist
            assert (a.kept_words, a.raw_words, a.emitted, a.matches) == (
                b.kept_words, b.raw_words, b.emitted, b.matches
            )


def test_vocab_avoids_enders_and_pattern(small_corpus):
    corpus_dir, manifest = small_corpus
    pattern = set(manifest["pattern"].split())
    stems = {a.rstrip(".") for a in default_abbreviations()}
    for path in sorted(corpus_dir.rglob("*.txt"))[:4]:
        for token in path.read_text(encoding="utf-8").split():
            core = token.rstrip(".;")
            if core in ("", "@", "<P>"):
                continue
            assert core.casefold() not in {p.casefold() for p in pattern} or token in pattern
            assert core not in stems
            # only the generator's own enders appear
            assert not any(ch in token for ch in "!?:")


def test_make_vocab_respects_forbidden_set():
    rng = np.random.default_rng(5)
    forbidden = {"bazu", "rilo"}
    vocab = _make_vocab(rng, 500, forbidden)
    assert len(vocab) == len(set(vocab)) == 500
    assert not forbidden & set(vocab)
    assert all(w.isalpha() and w.islower() for w in vocab)


def test_target_means_linear():
    spec = SMALL_SPEC
    means = _target_means(spec)
    assert means[0] == spec.mean_start and means[-1] == spec.mean_end
    diffs = [means[i + 1] - means[i] for i in range(len(means) - 1)]
    assert all(math.isclose(d, diffs[0]) for d in diffs)


def test_list_stats_matches_frozen_examples():
    s = _list_stats(list(range(1, 10)))
    assert (s["median"], s["q1"], s["q3"], s["mean"]) == (5.0, 3.0, 7.0, 5.0)
    s = _list_stats([4, 1, 3, 2])
    assert (s["median"], s["q1"], s["q3"]) == (2.5, 1.5, 3.5)
    assert _list_stats([])["mean"] is None


def test_movie_play_script_round_trip(tmp_path):
    spec = GeneratorSpec(
        seed=11,
        decades=(1960,),
        genres=("fiction", "movie_play_script"),
        docs_per_cell=2,
        sentences_per_cell=30,
        mean_start=9.0,
        mean_end=9.0,
    )
    out = tmp_path / "movie"
    manifest = generate_corpus(spec, out)
    assert manifest["reclass_file"] == "reclass.csv"
    # script files hide under the fiction prefix on disk
    assert all(p.name.startswith("fic_") for p in out.rglob("*.txt"))
    reclass = load_reclassification(out / "reclass.csv")
    refs, _ = scan_corpus(out, reclass=reclass)
    by_genre = {}
    for r in refs:
        by_genre.setdefault(r.genre.label, 0)
        by_genre[r.genre.label] += 1
    assert by_genre == {"fiction": 2, "movie_play_script": 2}
    cfg = PipelineConfig(
        tags=DEFAULT_TAGS,
        abbrev_tokens=default_abbreviations().tokens,
        modes=("standard",),
        min_words=2,
    )
    cells = run_pipeline(refs, cfg).cells["standard"]
    for cell in manifest["cells"]:
        key = GroupKey(decade=cell["decade"], genre=Genre(cell["genre"]))
        assert cells[key].hist.n == cell["kept"]


@pytest.mark.parametrize("kwargs,msg", [
    (dict(decades=()), "at least one decade"),
    (dict(decades=(1805,)), "multiple of 10"),
    (dict(decades=(2010,)), "multiple of 10"),
    (dict(genres=()), "at least one genre"),
    (dict(genres=("poetry",)), "no filename prefix"),
    (dict(docs_per_cell=0), "docs_per_cell"),
    (dict(sentences_per_cell=1), "docs_per_cell"),
    (dict(mean_start=2.0), "exceed 2.5"),
    (dict(style="loose"), "style"),
    (dict(semicolon_rate=1.0), "semicolon_rate"),
    (dict(short_rate=0.5, redaction_rate=0.5), "sum too close"),
    (dict(inject_per_cell=-1), "inject_per_cell"),
    (dict(inject_per_cell=3), "inject_pattern"),
])
def test_spec_validation(kwargs, msg):
    base = dict(
        seed=1, decades=(1900,), genres=("fiction",),
        docs_per_cell=2, sentences_per_cell=10,
        mean_start=8.0, mean_end=8.0,
    )
    base.update(kwargs)
    with pytest.raises(ValueError, match=msg):
        GeneratorSpec(**base)


def test_single_decade_and_attached_styles(tmp_path):
    for style in ("attached", "detached"):
        spec = GeneratorSpec(
            seed=3, decades=(1850,), genres=("newspaper",),
            docs_per_cell=2, sentences_per_cell=20,
            mean_start=7.0, mean_end=7.0, style=style,
        )
        out = tmp_path / style
        manifest = generate_corpus(spec, out)
        assert {f["style"] for f in manifest["files"]} == {style}
        refs, _ = scan_corpus(out)
        cfg = PipelineConfig(
            tags=DEFAULT_TAGS,
            abbrev_tokens=default_abbreviations().tokens,
            modes=("standard",),
            min_words=2,
        )
        cells = run_pipeline(refs, cfg).cells["standard"]
        cell = manifest["cells"][0]
        key = GroupKey(decade=1850, genre=Genre("newspaper"))
        assert cells[key].hist.n == cell["kept"]
        assert cells[key].kept_words == cell["words_kept"]


def test_load_manifest_round_trip(small_corpus):
    corpus_dir, manifest = small_corpus
    # tuples in the spec become JSON arrays, so compare in JSON space
    assert load_manifest(corpus_dir) == json.loads(json.dumps(manifest))
