"""Compare the compiled stencil kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--N 16] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from gswlab import _backend


def run(N, repeat):
    rng = np.random.default_rng(0)
    f = rng.standard_normal((6, N, N, N, N, 4))
    u = rng.standard_normal((N, N, N, N, 4))
    cases = {
        "diff forward": lambda: _backend.diff(f, 1, "forward", 0.1),
        "diff central": lambda: _backend.diff(f, 2, "central", 0.1),
        "dirac central": lambda: _backend.dirac(u, "central", 0.1, -1.0),
    }
    names = [b for b, ok in _backend.available().items() if ok]
    print(f"N = {N}, best of {repeat}")
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in names) + f"{'speedup':>10}")
    prev = _backend.name()
    try:
        for label, fn in cases.items():
            times = {}
            for b in names:
                _backend.use(b)
                fn()
                times[b] = min(timeit.repeat(fn, number=3, repeat=repeat)) / 3
            line = f"{label:<16}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in names)
            if "compiled" in times:
                line += f"{times['python'] / times['compiled']:>9.1f}x"
            print(line)
    finally:
        _backend.use(prev)


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--repeat", type=int, default=5)
    a = p.parse_args()
    run(a.N, a.repeat)
