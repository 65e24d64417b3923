"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import time

import numpy as np

from resonant31 import _pykernels as pure

try:
    from resonant31 import _ckernels as compiled
except ImportError:
    compiled = None


def _best(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _maxdiff(a, b):
    if isinstance(a, tuple):
        return max(_maxdiff(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b))) if a.shape == b.shape else math.nan


def cases():
    rng = np.random.default_rng(7)
    m = rng.uniform(0.0, 0.99, 2000)
    n = rng.uniform(-2.0, 0.9, 2000)
    a1 = rng.uniform(-3.0, 3.0, 20000)
    a2 = rng.uniform(-3.0, 3.0, 20000)
    E = rng.uniform(-1.0, 1.0, 20000)
    cc = np.array([[-0.3, 0.1, -0.2, 0.05], [0.1, -0.2, 0.05, -0.4]])
    y0 = np.array([0.01, 0.005, 0.0, 0.0])

    def rf(k):
        return lambda: [k.carlson_rf(0.0, 1.0 - v, 1.0) for v in m]

    def rj(k):
        return lambda: [k.carlson_rj(0.0, 1.0 - v, 1.0, 1.0 - w) for v, w in zip(m, n)]

    def qbatch(k):
        return lambda: k.quartic_t_batch(a1, a2, E)

    def strang(k, scheme):
        return lambda: k.strang_run(1.0, 3.1, cc, y0, 0.02, 20000, 10, scheme)

    def reduced(k):
        return lambda: k.reduced_run(1.0, -2.0, 1.0, 0.3, 0.2, 1e-3, 5000, 6)

    return [
        ("carlson_rf x2000", rf),
        ("carlson_rj x2000", rj),
        ("quartic_t_batch x20000", qbatch),
        ("strang_run verlet 2e4 steps", lambda k: strang(k, 0)),
        ("strang_run strang4 2e4 steps", lambda k: strang(k, 2)),
        ("reduced_run order 6, 5e3 steps", reduced),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled kernels not built; timing the pure-Python backend only")
    print(f"{'kernel':34s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, make in cases():
        tp, op = _best(make(pure), args.repeat)
        if compiled is None:
            print(f"{name:34s} {tp:11.4f}")
            continue
        tc, oc = _best(make(compiled), args.repeat)
        diff = _maxdiff(op, oc)
        print(f"{name:34s} {tp:11.4f} {tc:13.5f} {tp / tc:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
