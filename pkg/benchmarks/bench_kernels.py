"""Compare the compiled kernels with the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Prints per-kernel timings for both backends, checks that they agree, and
times a full period computation with each backend in a fresh interpreter.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from abeljacobi import _kernels_py

try:
    from abeljacobi import _kernels
except ImportError:
    _kernels = None


def _cases(rng):
    roots = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    xs = 3 + rng.standard_normal(32) + 1j * rng.standard_normal(32)
    dxw = rng.standard_normal(32) + 0j
    x0 = complex(xs[0])
    y0 = complex(np.sqrt(np.prod(x0 - roots)))
    t = np.linspace(0, 2 * np.pi, 400)
    a = np.exp(1j * t)
    b = 0.5 + 0.8 * np.exp(1j * (t + 0.1))
    return {
        "continuation_ratio": lambda k: k.continuation_ratio(xs, roots, x0),
        "piece_integrals": lambda k: k.piece_integrals(xs, dxw, roots, x0, y0, 4),
        "arg_increment": lambda k: k.arg_increment(x0, complex(xs[1]), roots),
        "segment_crossings": lambda k: k.segment_crossings(a[:-1], a[1:], b[:-1], b[1:], 1e-9),
    }


def _same(u, v) -> bool:
    if isinstance(u, tuple):
        return all(_same(p, q) for p, q in zip(u, v))
    return np.allclose(u, v, rtol=1e-12, atol=1e-14)


PIPELINE = (
    "import time, abeljacobi as aj;"
    "c = aj.new_curve([-1, 0.3, 0, 0, 0, 0, 0, 0, 0, 1]);"
    "t = time.perf_counter(); [aj.period_matrices(c) for _ in range({n})];"
    "print(aj.BACKEND, (time.perf_counter() - t) / {n})"
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()
    cases = _cases(np.random.default_rng(0))
    print(f"{'kernel':22s} {'numpy (us)':>12s} {'cython (us)':>12s} {'speedup':>8s}")
    for name, fn in cases.items():
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=args.repeat, repeat=3)) / args.repeat
        if _kernels is None:
            print(f"{name:22s} {tp * 1e6:12.2f} {'n/a':>12s}")
            continue
        if not _same(fn(_kernels_py), fn(_kernels)):
            raise SystemExit(f"backends disagree on {name}")
        tc = min(timeit.repeat(lambda: fn(_kernels), number=args.repeat, repeat=3)) / args.repeat
        print(f"{name:22s} {tp * 1e6:12.2f} {tc * 1e6:12.2f} {tp / tc:8.1f}x")

    print("\nperiod_matrices, genus 4 (seconds per call)")
    for flag in ("0", "1"):
        env = dict(os.environ, ABELJACOBI_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", PIPELINE.format(n=5)], env=env,
                             capture_output=True, text=True, check=True)
        print(" ", out.stdout.strip())


if __name__ == "__main__":
    main()
