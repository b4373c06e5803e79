"""Compare the compiled and pure-Python kernels on Monte Carlo-sized workloads.

Run with ``python benchmarks/bench_kernels.py``.
"""
import argparse
import time

import numpy as np

from kpzlab import kernels


def workloads(rng):
    # 1024 configurations of Poisson(1600) points: one block at lambda = 40
    counts = rng.poisson(1600, 1024)
    values = rng.random(int(counts.sum()))
    offsets = np.concatenate([[0], np.cumsum(counts)])
    grids = rng.geometric(0.5, size=(1024, 6, 6)) - 1
    return {
        "lis_segments": lambda impl: impl.lis_segments(values, offsets, False),
        "lis_segments_weak": lambda impl: impl.lis_segments(np.floor(values * 50), offsets, True),
        "last_passage_batch": lambda impl: impl.last_passage_batch(grids),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if "cython" not in kernels.IMPLEMENTATIONS:
        print("compiled kernels unavailable; only the Python fallback is importable")
    tasks = workloads(np.random.default_rng(0))
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name in kernels.IMPLEMENTATIONS) + f"{'speedup':>10}")
    for task, fn in tasks.items():
        results = {name: fn(impl) for name, impl in kernels.IMPLEMENTATIONS.items()}
        ref = results["python"]
        for name, out in results.items():
            assert np.array_equal(out, ref), f"{name} disagrees on {task}"
        t = {name: best_of(lambda impl=impl: fn(impl), args.repeat) for name, impl in kernels.IMPLEMENTATIONS.items()}
        speed = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"{task:<22}" + "".join(f"{t[name]:>11.4f}s" for name in t) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
