"""Time the fused Monte-Carlo kernel on the numba and numpy backends.

    python3 benchmarks/bench_backends.py [--pairs 100000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from eraser_sim import kernels
from eraser_sim.correlator import FRINGE_SIGN
from eraser_sim.ensemble import EnsembleSpec
from eraser_sim.model import Mode


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    spec = EnsembleSpec(args.pairs, 42, 1.0)
    results = {}
    for name in kernels.available_backends():
        def run():
            return kernels.simulate(spec.key, 0, args.pairs, spec.sigma, 0.3, 0.1, 1.0,
                                    FRINGE_SIGN, int(Mode.ERASER), name=name)
        t0 = time.perf_counter()
        results[name] = run()
        warm = time.perf_counter() - t0
        best = best_time(run, args.repeat)
        print(f"{name:6s} first call {warm * 1e3:8.1f} ms   best of {args.repeat} "
              f"{best * 1e3:8.2f} ms   {args.pairs / best / 1e6:6.2f} Mpairs/s")

    if len(results) == 2:
        (va, oa), (vb, ob) = results.values()
        print(f"max |value diff| {np.max(np.abs(va - vb)):.2e}, "
              f"outcome mismatches {int(np.sum(oa != ob))}")


if __name__ == "__main__":
    main()
