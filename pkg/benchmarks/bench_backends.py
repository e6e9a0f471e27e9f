"""Time the compiled and numpy kernels on direct and product-grid workloads.

Usage: python3 benchmarks/bench_backends.py [--repeat 3] [--threads 1]
"""

import argparse
import os
import time

import numpy as np

from ndlomb import _backend
from ndlomb.synth import simple_wave
from ndlomb.types import FrequencyGrid, SampleSet


def _workloads():
    rng = np.random.default_rng(0)
    preset = simple_wave(seed=1, step=0.05)
    yield "product 2-D, N=6561, 401x401", preset.samples, preset.grid
    s = SampleSet(rng.uniform(0, 10, (2000, 2)), rng.normal(size=2000))
    yield "direct 2-D, N=2000, F=20000", s, FrequencyGrid(rng.uniform(-5, 5, (20000, 2)))
    s = SampleSet(rng.uniform(0, 100, (5000, 1)), rng.normal(size=5000))
    yield "direct 1-D, N=5000, F=5000", s, FrequencyGrid(rng.uniform(0, 5, (5000, 1)))


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1, help="0 uses all cores")
    args = ap.parse_args()
    threads = args.threads or os.cpu_count()
    names = sorted(_backend.BACKENDS)
    print(f"threads={threads}  best of {args.repeat}")
    print(f"{'workload':34s}" + "".join(f"{n:>12s}" for n in names) + "     speedup")
    for label, samples, grid in _workloads():
        times = {}
        for name in names:
            if grid.axes is not None:
                fn = lambda: _backend.trig_sums(samples.coords, samples.values,
                                                axis_omegas=grid.axis_omegas,
                                                threads=threads, backend=name)
            else:
                fn = lambda: _backend.trig_sums(samples.coords, samples.values,
                                                omegas=grid.omegas,
                                                threads=threads, backend=name)
            times[name] = _time(fn, args.repeat)
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:34s}" + "".join(f"{times[n]:11.3f}s" for n in names)
              + f"{speed:11.1f}x")


if __name__ == "__main__":
    main()
