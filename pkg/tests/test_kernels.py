"""Cross-checks between the numba and numpy kernel implementations.

Both paths must be bit-identical on arbitrary flag arrays, not just on flag
combinations the classifier happens to emit, so inputs here are raw random
bitmasks.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from diachron import kernels
from diachron.backend import ENV_VAR
from diachron.kernels import (
    _boundaries_nb,
    _boundaries_np,
    _match_count_nb,
    _match_count_np,
    _segments_nb,
    _segments_np,
    boundaries,
    segments,
    window_match_count,
)

nb_required = pytest.mark.skipif(
    not kernels.NUMBA_AVAILABLE, reason="numba not installed"
)


def random_flags(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 128, size=n, dtype=np.uint8)


@nb_required
@pytest.mark.parametrize("extended", [False, True])
def test_boundaries_paths_agree(extended):
    rng = np.random.default_rng(1001 + extended)
    for n in (1, 2, 3, 7, 100, 4096):
        flags = random_flags(rng, n)
        np.testing.assert_array_equal(
            _boundaries_np(flags, extended), _boundaries_nb(flags, extended)
        )


@nb_required
def test_segments_paths_agree():
    rng = np.random.default_rng(2002)
    for trial in range(50):
        n = int(rng.integers(1, 500))
        flags = random_flags(rng, n)
        bounds = _boundaries_np(flags, bool(trial % 2))
        min_run = int(rng.integers(1, 12))
        a = _segments_np(flags, bounds, min_run)
        b = _segments_nb(flags, bounds, min_run)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)


@nb_required
def test_match_count_paths_agree():
    rng = np.random.default_rng(3003)
    for _ in range(200):
        n = int(rng.integers(1, 200))
        vocab = int(rng.integers(1, 6))
        ids = rng.integers(0, vocab, size=n).astype(np.int64)
        strip_ids = np.where(rng.random(n) < 0.3, rng.integers(0, vocab, size=n), ids)
        strip_ids = strip_ids.astype(np.int64)
        n_sent = int(rng.integers(1, 8))
        sid = np.sort(rng.integers(0, n_sent, size=n)).astype(np.int64)
        kept = rng.random(n_sent) < 0.7
        k = int(rng.integers(1, 5))
        pat = rng.integers(0, vocab, size=k).astype(np.int64)
        assert _match_count_np(ids, strip_ids, sid, kept, pat) == _match_count_nb(
            ids, strip_ids, sid, kept, pat
        )


def test_segments_redaction_run_must_be_consecutive():
    # 9 "@" then a word then another "@" is never a 10-run
    flags = np.array([2] * 9 + [1] + [2], dtype=np.uint8)
    bounds = np.zeros(11, dtype=np.bool_)
    bounds[-1] = True
    _, _, words, redacted = segments(flags, bounds, min_run=10)
    assert words.tolist() == [1]
    assert redacted.tolist() == [False]
    flags10 = np.array([2] * 10 + [1], dtype=np.uint8)
    bounds10 = np.zeros(11, dtype=np.bool_)
    bounds10[-1] = True
    _, _, _, redacted10 = segments(flags10, bounds10, min_run=10)
    assert redacted10.tolist() == [True]


def test_dispatch_empty_inputs():
    empty = np.zeros(0, dtype=np.uint8)
    assert boundaries(empty, False).shape == (0,)
    starts, ends, words, red = segments(empty, np.zeros(0, dtype=np.bool_))
    assert starts.shape == ends.shape == words.shape == red.shape == (0,)
    one = np.zeros(1, dtype=np.int64)
    pat = np.zeros(3, dtype=np.int64)
    assert window_match_count(one, one, one, np.ones(1, dtype=np.bool_), pat) == 0


_PROBE = (
    "import diachron.backend as b, diachron.kernels as k;"
    "print(b.ACTIVE, b.USING_NUMBA, k.NUMBA_AVAILABLE)"
)


def _run_probe(value: str) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    env[ENV_VAR] = value
    return subprocess.run(
        [sys.executable, "-c", _PROBE], env=env, capture_output=True, text=True
    )


def test_backend_env_numpy():
    proc = _run_probe("numpy")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.split()[:2] == ["numpy", "False"]


@nb_required
def test_backend_env_numba():
    proc = _run_probe("numba")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.split()[:2] == ["numba", "True"]


def test_backend_env_rejects_unknown():
    proc = _run_probe("bogus")
    assert proc.returncode != 0
    assert "DIACHRON_BACKEND" in proc.stderr
