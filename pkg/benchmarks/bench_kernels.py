"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Each pair is checked for equal output before timing. JIT compilation is
excluded by a warm-up call.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from bradfordizing import _kernels


def cases(rng: np.random.Generator):
    ranks20 = np.arange(2, 41, 2, dtype=np.int64)
    ranks60 = np.arange(2, 121, 2, dtype=np.int64)
    yield ("signed_rank_counts n=20", _kernels.signed_rank_counts_numpy,
           _kernels.signed_rank_counts_numba, (ranks20,))
    yield ("signed_rank_counts n=60", _kernels.signed_rank_counts_numpy,
           _kernels.signed_rank_counts_numba, (ranks60,))

    for m, k in ((60, 3), (400, 3), (400, 6)):
        sizes = np.sort(rng.integers(1, 40, m + 1))[::-1]
        interior = np.cumsum(sizes)[:-1]
        yield (f"snap_boundaries blocks={m + 1} k={k}", _kernels.snap_boundaries_numpy,
               _kernels.snap_boundaries_numba, (interior, int(sizes.sum()), k))

    def beta_grid(fn):
        out = 0.0
        for df in range(1, 51):
            for t in np.linspace(0.0, 10.0, 21):
                x = df / (df + t * t)
                out += fn(df / 2.0, 0.5, x, 1.0 - x)
        return out

    yield ("betainc t-grid 50x21", lambda: beta_grid(_kernels.betainc_python),
           lambda: beta_grid(_kernels.betainc_numba), ())


def run(repeat: int) -> int:
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable (or disabled); nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<36} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, slow, fast, args in cases(rng):
        a, b = slow(*args), fast(*args)
        if not np.allclose(a, b, rtol=1e-13, atol=0):
            print(f"{name}: outputs differ", file=sys.stderr)
            return 1
        t_np = min(timeit.repeat(lambda: slow(*args), number=1, repeat=repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fast(*args), number=1, repeat=repeat)) * 1e3
        print(f"{name:<36} {t_np:>10.3f} {t_nb:>10.3f} {t_np / t_nb:>7.1f}x")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    return run(parser.parse_args().repeat)


if __name__ == "__main__":
    sys.exit(main())
