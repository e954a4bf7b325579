"""Time the numba and pure-numpy thinning loops on identical configurations.

    python3 benchmarks/bench_simulator.py [--n 20 50 100] [--horizon 50] [--repeat 3]

Both backends consume the same uniform stream, so the event histories must
match bit for bit; the script checks that before reporting timings.
"""

import argparse
import time

import numpy as np

from partial_hawkes import _loops_numba, _loops_numpy, simulator
from partial_hawkes.graph import sample_graph
from partial_hawkes.kernels import BoxKernel, ExponentialKernel
from partial_hawkes.simulator import SimConfig, simulate


def timed(conf, loops, repeat):
    simulator.loops = loops
    best, ev = np.inf, None
    for _ in range(repeat):
        start = time.perf_counter()
        ev = simulate(conf)
        best = min(best, time.perf_counter() - start)
    return best, ev


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[20, 50, 100])
    ap.add_argument("--horizon", type=float, default=50.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    original = simulator.loops
    kernels = {"exp(1,2)": ExponentialKernel(1.0, 2.0), "box(2,0.25)": BoxKernel(2.0, 0.25)}
    # compile once so the numba timings exclude JIT cost
    for kern in kernels.values():
        timed(SimConfig(sample_graph(3, 0.5, 0), 1.0, kern, 1.0, 0), _loops_numba, 1)

    print(f"{'kernel':<12} {'N':>5} {'events':>8} {'numba s':>9} {'numpy s':>9} {'speedup':>8}  same")
    try:
        for name, kern in kernels.items():
            for N in args.n:
                conf = SimConfig(sample_graph(N, 0.5, 1), 1.0, kern, args.horizon, 2)
                t_fast, a = timed(conf, _loops_numba, args.repeat)
                t_slow, b = timed(conf, _loops_numpy, args.repeat)
                same = np.array_equal(a.times, b.times) and np.array_equal(a.ids, b.ids)
                print(f"{name:<12} {N:>5} {a.total_events:>8} {t_fast:>9.4f} {t_slow:>9.4f} "
                      f"{t_slow / t_fast:>8.1f}  {same}")
    finally:
        simulator.loops = original


if __name__ == "__main__":
    main()
