"""Seeded synthetic corpus generator with a ground-truth manifest.

The generator writes a decade/genre tree in the corpus filename grammar and,
alongside it, ``manifest.json`` recording the true per-file and per-cell
statistics, computed independently from the raw per-sentence lengths (plain
sorted-list arithmetic, no histogram machinery). Running the analysis
pipeline over the generated tree must reproduce the manifest exactly.

Sentences are drawn from a closed synthetic vocabulary that excludes every
default abbreviation stem and every injected pattern token, so ground truth
is exact by construction: the only sentence enders are the ones the
generator placed, and the only pattern occurrences are the injected ones.
The same spec always produces a byte-identical tree.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .ingest import DEFAULT_PREFIX_MAP, MOVIE_PLAY_SCRIPT
from .tokenizer import default_abbreviations

_GENRE_TO_PREFIX = {genre.label: prefix for prefix, genre in DEFAULT_PREFIX_MAP.items()}
# Script material hides under the fiction prefix and is recovered via reclassification.
_GENRE_TO_PREFIX[MOVIE_PLAY_SCRIPT.label] = "fic"

_ONSETS = "bcdfghjklmnprstvwz"
_VOWELS = "aeiou"

MANIFEST_NAME = "manifest.json"
RECLASS_NAME = "reclass.csv"


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one synthetic corpus; identical specs yield identical bytes."""

    seed: int
    decades: tuple[int, ...]
    genres: tuple[str, ...]
    docs_per_cell: int
    sentences_per_cell: int
    mean_start: float
    mean_end: float
    vocab_size: int = 2000
    style: str = "mixed"  # mixed | attached | detached punctuation
    semicolon_rate: float = 0.0
    redaction_rate: float = 0.0
    short_rate: float = 0.0
    tag_rate: float = 0.0
    inject_pattern: str | None = None
    inject_per_cell: int = 0

    def __post_init__(self):
        if not self.decades:
            raise ValueError("need at least one decade")
        for d in self.decades:
            if d % 10 != 0 or not 1810 <= d <= 2000:
                raise ValueError(f"decade must be a multiple of 10 in 1810-2000: {d}")
        if not self.genres:
            raise ValueError("need at least one genre")
        for g in self.genres:
            if g not in _GENRE_TO_PREFIX:
                raise ValueError(f"no filename prefix for genre {g!r} "
                                 f"(known: {sorted(_GENRE_TO_PREFIX)})")
        if self.docs_per_cell < 1 or self.sentences_per_cell < self.docs_per_cell:
            raise ValueError("need docs_per_cell >= 1 and sentences_per_cell >= docs_per_cell")
        if min(self.mean_start, self.mean_end) <= 2.5:
            raise ValueError("target means must exceed 2.5 words")
        if self.style not in ("mixed", "attached", "detached"):
            raise ValueError(f"style must be mixed/attached/detached, got {self.style!r}")
        for name in ("semicolon_rate", "redaction_rate", "short_rate", "tag_rate"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {v}")
        total = self.semicolon_rate + self.redaction_rate + self.short_rate
        if total >= 0.9:
            raise ValueError("special-sentence rates sum too close to 1")
        if self.inject_per_cell < 0:
            raise ValueError("inject_per_cell must be >= 0")
        if self.inject_per_cell > 0 and not self.inject_pattern:
            raise ValueError("inject_per_cell needs inject_pattern")

    @property
    def pattern_tokens(self) -> tuple[str, ...]:
        return tuple(self.inject_pattern.split()) if self.inject_pattern else ()


def _target_means(spec: GeneratorSpec) -> list[float]:
    k = len(spec.decades)
    if k == 1:
        return [spec.mean_start]
    step = (spec.mean_end - spec.mean_start) / (k - 1)
    return [spec.mean_start + step * i for i in range(k)]


def _make_vocab(rng: np.random.Generator, size: int, forbidden: set[str]) -> list[str]:
    words: list[str] = []
    seen = set(forbidden)
    while len(words) < size:
        syllables = 2 + int(rng.integers(0, 2))
        w = "".join(
            _ONSETS[int(rng.integers(0, len(_ONSETS)))] + _VOWELS[int(rng.integers(0, len(_VOWELS)))]
            for _ in range(syllables)
        )
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def _list_stats(lengths: list[int]) -> dict:
    """Brute-force box stats over a raw length list (the manifest's oracle route)."""
    xs = sorted(lengths)
    n = len(xs)
    if n == 0:
        return {"mean": None, "median": None, "q1": None, "q3": None, "min": None, "max": None}

    def at_depth(depth: float) -> float:
        lo = math.floor(depth)
        hi = math.ceil(depth)
        if lo == hi:
            return float(xs[lo - 1])
        return (xs[lo - 1] + xs[hi - 1]) / 2

    median_depth = (n + 1) / 2
    hinge_depth = (math.floor(median_depth) + 1) / 2
    return {
        "mean": sum(xs) / n,
        "median": at_depth(median_depth),
        "q1": at_depth(hinge_depth),
        "q3": at_depth(n + 1 - hinge_depth),
        "min": xs[0],
        "max": xs[-1],
    }


def generate_corpus(spec: GeneratorSpec, out_dir: Path) -> dict:
    """Write the corpus tree plus manifest.json; returns the manifest dict."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    pattern_tokens = spec.pattern_tokens
    forbidden = {a.rstrip(".").casefold() for a in default_abbreviations()}
    forbidden |= {t.casefold() for t in pattern_tokens}
    forbidden.add("@")
    vocab = _make_vocab(rng, spec.vocab_size, forbidden)

    means = _target_means(spec)
    next_id = 100001
    files: list[dict] = []
    cells: list[dict] = []
    reclass_rows: list[tuple[str, str]] = []

    for di, decade in enumerate(spec.decades):
        lam = means[di] - 2.0
        for genre in spec.genres:
            prefix = _GENRE_TO_PREFIX[genre]
            n_cell = spec.sentences_per_cell
            lengths = (2 + rng.poisson(lam, n_cell)).astype(np.int64)

            u = rng.random(n_cell)
            sr, rr, mr = spec.short_rate, spec.redaction_rate, spec.semicolon_rate
            cats = np.zeros(n_cell, dtype=np.uint8)  # 0 plain, 1 short, 2 redacted, 3 semicolon, 4 pattern
            cats[u < sr] = 1
            cats[(u >= sr) & (u < sr + rr)] = 2
            semi_ok = (u >= sr + rr) & (u < sr + rr + mr) & (lengths >= 4)
            cats[semi_ok] = 3
            tags = rng.random(n_cell) < spec.tag_rate

            if spec.inject_per_cell:
                eligible = np.flatnonzero(cats == 0)
                if eligible.size < spec.inject_per_cell:
                    raise ValueError(
                        f"cell ({decade}, {genre}) has {eligible.size} plain sentences, "
                        f"cannot hold {spec.inject_per_cell} pattern injections"
                    )
                slots = rng.choice(eligible, size=spec.inject_per_cell, replace=False)
                cats[slots] = 4

            positions = np.zeros(n_cell, dtype=np.int64)
            for i in range(n_cell):
                length = int(lengths[i])
                if cats[i] == 3:
                    # both halves of the extended-mode split must clear the
                    # default two-word filter: ; goes after word p, 1 <= p <= L-3
                    positions[i] = int(rng.integers(1, length - 3, endpoint=True))
                elif cats[i] == 2:
                    positions[i] = int(rng.integers(1, length - 1, endpoint=True))
                elif cats[i] == 4:
                    positions[i] = int(rng.integers(1, length - 1, endpoint=True))

            kept_lengths: list[int] = []
            cell_words_all = 0
            n_red = int(np.count_nonzero(cats == 2))
            n_short = int(np.count_nonzero(cats == 1))
            n_semi = int(np.count_nonzero(cats == 3))
            n_pat = int(np.count_nonzero(cats == 4))

            base = n_cell // spec.docs_per_cell
            rem = n_cell % spec.docs_per_cell
            cursor = 0
            for d in range(spec.docs_per_cell):
                n_doc = base + (1 if d < rem else 0)
                if spec.style == "mixed":
                    attached = d % 2 == 0
                else:
                    attached = spec.style == "attached"
                year = decade + (d % 10)
                source_id = str(next_id)
                next_id += 1
                doc_lines: list[str] = []
                doc_words = 0
                doc_kept = 0
                for i in range(cursor, cursor + n_doc):
                    cat = int(cats[i])
                    length = 1 if cat == 1 else int(lengths[i])
                    ids = rng.integers(0, spec.vocab_size, length)
                    words = [vocab[int(j)] for j in ids]
                    pos = int(positions[i])
                    if cat == 4:
                        words = words[:pos] + list(pattern_tokens) + words[pos:]
                    words[0] = words[0].capitalize()
                    tokens = list(words)
                    if cat == 2:
                        tokens = tokens[:pos] + ["@"] * 10 + tokens[pos:]
                    elif cat == 3:
                        if attached:
                            tokens[pos] = tokens[pos] + ";"
                        else:
                            tokens = tokens[:pos + 1] + [";"] + tokens[pos + 1:]
                    if attached:
                        tokens[-1] = tokens[-1] + "."
                    else:
                        tokens.append(".")
                    if tags[i]:
                        tokens.insert(0, "<P>")
                    n_words = len(words)
                    doc_words += n_words
                    cell_words_all += n_words
                    if cat in (0, 3, 4):
                        kept_lengths.append(n_words)
                        doc_kept += 1
                    doc_lines.append(" ".join(tokens))
                cursor += n_doc

                rel = f"{decade}/{prefix}_{year}_{source_id}.txt"
                fpath = out_dir / rel
                fpath.parent.mkdir(parents=True, exist_ok=True)
                fpath.write_text("\n".join(doc_lines) + "\n", encoding="utf-8", newline="\n")
                files.append({
                    "path": rel,
                    "genre": genre,
                    "year": year,
                    "decade": decade,
                    "style": "attached" if attached else "detached",
                    "sentences": n_doc,
                    "kept_sentences": doc_kept,
                    "words": doc_words,
                })
                if genre == MOVIE_PLAY_SCRIPT.label:
                    reclass_rows.append((source_id, genre))

            words_kept = sum(kept_lengths)
            stats = _list_stats(kept_lengths)
            per_million_kept = None
            if pattern_tokens and words_kept > 0:
                per_million_kept = n_pat / words_kept * 1_000_000.0
            cells.append({
                "decade": decade,
                "genre": genre,
                "sentences": n_cell,
                "kept": len(kept_lengths),
                "redacted": n_red,
                "short": n_short,
                "semicolons": n_semi,
                "pattern_count": n_pat,
                "extended_kept": len(kept_lengths) + n_semi,
                "words_all": cell_words_all,
                "words_kept": words_kept,
                "per_million_kept": per_million_kept,
                **stats,
            })

    reclass_file = None
    if reclass_rows:
        reclass_file = RECLASS_NAME
        lines = ["source_id,genre"]
        lines += [f"{sid},{genre}" for sid, genre in reclass_rows]
        (out_dir / RECLASS_NAME).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    manifest = {
        "format": "diachron-manifest/1",
        "spec": asdict(spec),
        "pattern": spec.inject_pattern,
        "reclass_file": reclass_file,
        "files": files,
        "cells": cells,
        "totals": {
            "files": len(files),
            "sentences": sum(c["sentences"] for c in cells),
            "kept": sum(c["kept"] for c in cells),
            "words_all": sum(c["words_all"] for c in cells),
            "words_kept": sum(c["words_kept"] for c in cells),
            "pattern_count": sum(c["pattern_count"] for c in cells),
        },
    }
    with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8", newline="") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest


def load_manifest(corpus_dir: Path) -> dict:
    with open(Path(corpus_dir) / MANIFEST_NAME, encoding="utf-8") as fh:
        return json.load(fh)
