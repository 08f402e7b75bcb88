"""Times the numba kernels against their numpy twins on synthetic flag arrays.

Run directly:

    python3 benchmarks/bench_kernels.py [--tokens 2000000] [--repeats 5]

Both implementations are imported regardless of DIACHRON_BACKEND, so one
process can time the pair side by side. The first numba call is excluded
from timing (jit compilation).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from diachron import kernels
from diachron.kernels import (
    _boundaries_nb,
    _boundaries_np,
    _match_count_nb,
    _match_count_np,
    _segments_nb,
    _segments_np,
)


def _time(fn, *args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def build_inputs(n_tokens: int, seed: int = 9):
    rng = np.random.default_rng(seed)
    flags = rng.integers(0, 128, size=n_tokens, dtype=np.uint8)
    bounds = _boundaries_np(flags, False)
    ids = rng.integers(0, 50, size=n_tokens).astype(np.int64)
    strip_ids = ids.copy()
    n_sent = max(1, int(bounds.sum()))
    sid = np.minimum(np.cumsum(bounds) - bounds, n_sent - 1).astype(np.int64)
    kept = np.ones(n_sent, dtype=np.bool_)
    pat = np.array([1, 2, 3], dtype=np.int64)
    return flags, bounds, ids, strip_ids, sid, kept, pat


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tokens", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not kernels.NUMBA_AVAILABLE:
        print("numba is not installed; nothing to compare")
        return 1

    flags, bounds, ids, strip_ids, sid, kept, pat = build_inputs(args.tokens)

    # compile outside the timed region
    _boundaries_nb(flags[:64], False)
    _segments_nb(flags[:64], _boundaries_np(flags[:64], False), 10)
    _match_count_nb(ids[:64], strip_ids[:64], sid[:64], kept, pat)

    rows = [
        ("boundaries", (_boundaries_np, (flags, False)), (_boundaries_nb, (flags, False))),
        ("segments", (_segments_np, (flags, bounds, 10)), (_segments_nb, (flags, bounds, 10))),
        ("window_match_count",
         (_match_count_np, (ids, strip_ids, sid, kept, pat)),
         (_match_count_nb, (ids, strip_ids, sid, kept, pat))),
    ]

    print(f"{args.tokens} tokens, best of {args.repeats}")
    print(f"{'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, (np_fn, np_args), (nb_fn, nb_args) in rows:
        t_np = _time(np_fn, *np_args, repeats=args.repeats)
        t_nb = _time(nb_fn, *nb_args, repeats=args.repeats)
        print(f"{name:<20} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
