import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diachron import TokenPattern, UndefinedRate, build_series, count_matches, per_million


def naive_strip(token):
    while token and not token[-1].isalnum():
        token = token[:-1]
    return token


def naive_count(tokens, pattern_tokens, case_sensitive=False):
    """Reference scan: O(n*k) window walk, trailing punctuation tolerated
    only on the final pattern position."""
    fold = (lambda s: s) if case_sensitive else str.casefold
    toks = [fold(t) for t in tokens]
    pats = [fold(p) for p in pattern_tokens]
    k = len(pats)
    hits = 0
    for i in range(len(toks) - k + 1):
        if toks[i:i + k - 1] != pats[:k - 1]:
            continue
        last = toks[i + k - 1]
        if last == pats[-1] or naive_strip(last) == pats[-1]:
            hits += 1
    return hits


def test_two_occurrences_with_case_folding():
    tokens = "In order to win, we must act in order to survive.".split()
    assert count_matches(tokens, TokenPattern.parse("in order to")) == 2


def test_trailing_punctuation_tolerated_on_last_position_only():
    assert count_matches("we act in order to, always".split(),
                         TokenPattern.parse("in order to")) == 1
    # interior positions must match exactly
    assert count_matches("we act in, order to win".split(),
                         TokenPattern.parse("in order to")) == 0


def test_overlapping_matches_count():
    assert count_matches(["a", "a", "a"], TokenPattern(("a", "a"))) == 2
    assert count_matches(["go", "go", "go", "go"], TokenPattern(("go", "go", "go"))) == 2


def test_case_sensitivity_switch():
    tokens = ["The", "the", "cat"]
    assert count_matches(tokens, TokenPattern(("the", "the"))) == 1
    assert count_matches(tokens, TokenPattern(("the", "the"), case_sensitive=True)) == 0
    assert count_matches(tokens, TokenPattern(("The", "the"), case_sensitive=True)) == 1


def test_single_token_pattern_and_punctuation_token():
    tokens = "a ; b. c d.".split()
    assert count_matches(tokens, TokenPattern((";",))) == 1
    assert count_matches(tokens, TokenPattern(("c",))) == 1
    # "b." matches pattern token "b" by stripping, and "b" matches "b." never
    assert count_matches(tokens, TokenPattern(("b",))) == 1
    assert count_matches(tokens, TokenPattern(("b.",))) == 1


def test_pattern_longer_than_text():
    assert count_matches(["one"], TokenPattern(("one", "two"))) == 0


def test_pattern_validation():
    with pytest.raises(ValueError):
        TokenPattern(())
    with pytest.raises(ValueError):
        TokenPattern(("a b",))
    with pytest.raises(ValueError):
        TokenPattern.parse("   ")


def test_per_million_arithmetic():
    assert per_million(20, 1_000_000) == pytest.approx(20.0, abs=1e-12)
    assert per_million(0, 0) == 0.0
    assert per_million(3, 1500) == pytest.approx(2000.0, abs=1e-9)
    with pytest.raises(UndefinedRate):
        per_million(5, 0)
    with pytest.raises(ValueError):
        per_million(-1, 10)


def test_build_series_adds_corpus_wide_rows():
    counts = {
        (1810, "fiction"): (2, 1000),
        (1810, "magazine"): (3, 1000),
        (1900, "fiction"): (0, 500),
    }
    series = build_series(TokenPattern.parse("in order to"), counts)
    assert series.pattern == "in order to"
    rows = {(r.decade, r.genre): r for r in series.rows}
    assert rows[(1810, "all")].match_count == 5
    assert rows[(1810, "all")].word_total == 2000
    assert rows[(1810, "all")].per_million == pytest.approx(2500.0)
    assert rows[(1900, "all")].match_count == 0
    # rows sorted by (decade, genre); "all" sorts with the genre labels
    assert [(r.decade, r.genre) for r in series.rows] == [
        (1810, "all"), (1810, "fiction"), (1810, "magazine"),
        (1900, "all"), (1900, "fiction"),
    ]


_VOCAB = ["in", "order", "to", "a", "b", "win,", "to,", "to.", "act", "IN", "Order", "TO", "@", ";"]


def test_thousand_seeded_scans_match_oracle():
    rng = random.Random(99)
    for trial in range(1000):
        n = rng.randint(0, 40)
        tokens = [rng.choice(_VOCAB) for _ in range(n)]
        k = rng.randint(1, 3)
        pattern_tokens = tuple(rng.choice(["in", "order", "to", "a", "b"]) for _ in range(k))
        cs = rng.random() < 0.3
        got = count_matches(tokens, TokenPattern(pattern_tokens, case_sensitive=cs))
        want = naive_count(tokens, pattern_tokens, case_sensitive=cs)
        assert got == want, (trial, tokens, pattern_tokens, cs)


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.sampled_from(_VOCAB), min_size=0, max_size=30),
    st.lists(st.sampled_from(["in", "order", "to", "a", "b"]), min_size=1, max_size=4),
    st.booleans(),
)
def test_fuzzed_scans_match_oracle(tokens, pattern_tokens, case_sensitive):
    got = count_matches(tokens, TokenPattern(tuple(pattern_tokens), case_sensitive=case_sensitive))
    assert got == naive_count(tokens, pattern_tokens, case_sensitive=case_sensitive)
