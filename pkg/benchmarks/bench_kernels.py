"""Compare the pure-python and compiled term-dict kernels.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each workload runs on both kernel modules directly, so the numbers are
independent of which lane the package selected at import time.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from keller_lab import _purepoly

try:
    from keller_lab import _fastpoly
except ImportError:
    _fastpoly = None


def simplex_power(kernel, n: int, k: int) -> dict:
    z = {}
    for i in range(n):
        exps = [0] * n
        exps[i] = 1
        z[tuple(exps)] = Fraction(1)
    return kernel.pow_terms(z, k, n)


def sparse_univariate(step: int, count: int) -> dict:
    return {(i * step,): Fraction(i + 1, 7) for i in range(count)}


def workloads(kernel):
    big = simplex_power(kernel, 4, 5)
    bigger = simplex_power(kernel, 4, 6)
    sparse_a = sparse_univariate(3, 60)
    sparse_b = sparse_univariate(5, 60)
    point = (Fraction(3, 7), Fraction(-2, 5), Fraction(1, 3), Fraction(4, 9))
    return [
        ("pow (x1+..+x4)^8", lambda: simplex_power(kernel, 4, 8)),
        ("mul dense 4-var deg 5*6", lambda: kernel.mul_terms(big, bigger)),
        ("mul sparse univariate", lambda: kernel.mul_terms(sparse_a,
                                                           sparse_b)),
        ("add dense + shifted", lambda: kernel.add_terms(
            big, kernel.scale_terms(Fraction(-1), big))),
        ("eval dense at rationals", lambda: kernel.eval_terms(bigger, point)),
    ]


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="repetitions per workload (best time wins)")
    args = parser.parse_args()

    lanes = [("pure", _purepoly)]
    if _fastpoly is not None:
        lanes.append(("compiled", _fastpoly))
    else:
        print("compiled extension not built; showing the pure lane only")

    results: dict[str, dict[str, float]] = {}
    for lane_name, module in lanes:
        for name, fn in workloads(module):
            results.setdefault(name, {})[lane_name] = best_time(
                fn, args.repeat)

    width = max(len(name) for name in results) + 2
    header = f"{'workload':<{width}}{'pure':>12}"
    if _fastpoly is not None:
        header += f"{'compiled':>12}{'speedup':>10}"
    print(f"kernel benchmark (best of {args.repeat})")
    print(header)
    for name, times in results.items():
        line = f"{name:<{width}}{times['pure'] * 1000:>10.2f}ms"
        if _fastpoly is not None:
            compiled = times["compiled"]
            ratio = times["pure"] / compiled if compiled > 0 else float("inf")
            line += f"{compiled * 1000:>10.2f}ms{ratio:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
