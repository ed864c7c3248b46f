"""Compare the compiled and pure-Python short-vector kernels.

    python3 benchmarks/bench_enum.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from mukai_kit import kernels
from mukai_kit.dynkin import cartan_matrix


def _cases():
    for label in ("D6", "E6", "E7", "E8"):
        yield f"{label} roots", cartan_matrix(label), 2, None
    yield "E8 norm 4", cartan_matrix("E8"), 4, None
    yield "E7 shifted", cartan_matrix("E7"), Fraction(5, 2), [Fraction(1, 2)] + [0] * 6


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args(argv)
    if kernels.BACKEND != "cython":
        print("compiled kernel not available; only the Python kernel will run")
    print(f"{'case':<14} {'vectors':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, gram, target, center in _cases():
        py = kernels.enumerate_shifted(gram, target, center, backend="python")
        tp = _time(lambda: kernels.enumerate_shifted(gram, target, center, backend="python"), a.repeat)
        if kernels.BACKEND == "cython":
            cy = kernels.enumerate_shifted(gram, target, center, backend="cython")
            if cy != py:
                raise SystemExit(f"{name}: backends disagree")
            tc = _time(lambda: kernels.enumerate_shifted(gram, target, center, backend="cython"), a.repeat)
            print(f"{name:<14} {len(py):>8} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
        else:
            print(f"{name:<14} {len(py):>8} {tp:>10.4f} {'-':>10} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
