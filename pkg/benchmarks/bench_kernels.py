"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 256 1024 4096] [--repeat 3]
"""

import argparse
import sys
import timeit

import numpy as np

from tritop import _fallback

try:
    from tritop import _kernels
except ImportError:
    _kernels = None


def cases(n, rng):
    a = (1.0 + np.arange(n)) ** -0.5
    x, y = rng.standard_normal((2, n))
    ks = np.unique(np.geomspace(1, n - 1, 64).astype(np.int64))
    return {
        "naive_inverse": lambda m: m.naive_inverse(a, n),
        "schoolbook": lambda m: m.schoolbook(x, y, n, True),
        "prefix_sum": lambda m: m.prefix_sum(x),
        "conv_at": lambda m: m.conv_at(x, y, ks),
    }


def best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 1_000_000:
        number *= 10
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; only the fallback is available", file=sys.stderr)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14} {'n':>6} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9}")
    for n in args.sizes:
        for name, run in cases(n, rng).items():
            t_py = best(lambda: run(_fallback), args.repeat)
            if _kernels is None:
                print(f"{name:<14} {n:>6} {t_py:>12.3e} {'-':>12} {'-':>9}")
                continue
            t_cy = best(lambda: run(_kernels), args.repeat)
            print(f"{name:<14} {n:>6} {t_py:>12.3e} {t_cy:>12.3e} {t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
