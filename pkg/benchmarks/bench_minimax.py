"""Compare the compiled and pure-Python minimax kernels.

    python3 benchmarks/bench_minimax.py [--repeat 3]

Each row times a fresh search (empty memo) for the classical depth and, where
it applies, the full advanced-information sweep.
"""

from __future__ import annotations

import argparse
import statistics
import time

from qspeedup.families import builtin
from qspeedup.kernels import COMPILED_AVAILABLE
from qspeedup.query import Search, advanced_query_complexity

CASES = ("grover3", "grover4", "bv4", "perm", "simon2", "minute")


def _time(fn, repeat: int) -> tuple[float, object]:
    runs, result = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        runs.append(time.perf_counter() - start)
    return statistics.median(runs), result


def bench(name: str, backend: str, repeat: int) -> tuple[float, float, int, int]:
    family = builtin(name)

    def classical():
        search = Search(family, backend)
        return search.depth(search.full)

    def advanced():
        return advanced_query_complexity(family, None, Search(family, backend)).depth

    t_c, depth = _time(classical, repeat)
    t_a, adv = _time(advanced, repeat)
    return t_c, t_a, depth, adv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = ["python"] + (["cython"] if COMPILED_AVAILABLE else [])
    print("family\tbackend\tclassical_s\tadvanced_s\tclassical\tadvanced")
    for name in CASES:
        results = {}
        for b in backends:
            t_c, t_a, depth, adv = bench(name, b, args.repeat)
            results[b] = (t_c, t_a, depth, adv)
            print(f"{name}\t{b}\t{t_c:.4f}\t{t_a:.4f}\t{depth}\t{adv}")
        if len(results) == 2:
            assert results["python"][2:] == results["cython"][2:], f"{name}: backends disagree"
            speedup = results["python"][0] / max(results["cython"][0], 1e-9)
            print(f"# {name}: compiled classical search {speedup:.1f}x faster")
    if not COMPILED_AVAILABLE:
        print("# compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
