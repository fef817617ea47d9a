"""Time the compiled extension against the pure-Python fallback on the hot kernels.

    python3 benchmarks/bench_backends.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from pssk import _backend


def cases(rng):
    F = np.sort(rng.random((200, 2)), axis=1)
    G = np.sort(rng.random((200, 2)), axis=1)
    C = rng.random((80, 80))
    A = rng.standard_normal((40, 40))
    A = A + A.T
    return {
        "pssk_sum 200x200": lambda: _backend.pssk_sum(F, G, 0.1),
        "hungarian 80x80": lambda: _backend.hungarian(C),
        "jacobi 40x40": lambda: _backend.jacobi_eigenvalues(A, 1e-12, 100),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = [n for n in ("python", "compiled") if n in _backend.BACKENDS]
    timings: dict[str, dict[str, float]] = {}
    for name in names:
        _backend.use(name)
        for label, fn in cases(np.random.default_rng(0)).items():
            fn()  # warm up
            t = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            timings.setdefault(label, {})[name] = t
    print(f"{'kernel':<20}" + "".join(f"{n:>14}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, row in timings.items():
        line = f"{label:<20}" + "".join(f"{row[n] * 1e3:>12.3f}ms" for n in names)
        if len(names) == 2:
            line += f"{row['python'] / row['compiled']:>11.1f}x"
        print(line)
    if "compiled" not in names:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
