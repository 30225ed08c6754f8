"""Compare the compiled recurrence kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel: best wall time of each backend, the speed-up,
and the largest relative disagreement between the two.
"""
import argparse
import timeit

import numpy as np

from sbtoeplitz import _pykernels

try:
    from sbtoeplitz import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _cases():
    x = np.linspace(0.0, 400.0, 4000)
    z = np.linspace(-30.0, 30.0, 2000) + 0.5j
    n = 400
    diag = np.zeros(n)
    off = np.sqrt(np.arange(1, n) / 2.0)
    nodes = np.linalg.eigvalsh(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
    return {
        "laguerre_rows": (lambda m: m.laguerre_rows(np.arange(0, 200, 7), 1.0, x)),
        "hermite_fn_rows": (lambda m: m.hermite_fn_rows(120, z)),
        "christoffel_log": (lambda m: m.christoffel_log(diag, off, np.sqrt(np.pi), nodes)),
    }


def _rel_diff(a, b):
    if isinstance(a, tuple):
        # (mantissa, log-scale) pairs: compare the represented values in logs
        la = np.log(np.abs(a[0]) + 1e-300) + a[1]
        lb = np.log(np.abs(b[0]) + 1e-300) + b[1]
        ok = np.abs(a[0]) > 0
        return float(np.max(np.abs(la - lb)[ok])) if np.any(ok) else 0.0
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not available; nothing to compare")
        return
    print(f"{'kernel':18s} {'cython [ms]':>12s} {'python [ms]':>12s} {'speed-up':>9s} {'max diff':>10s}")
    for name, run in _cases().items():
        tc = min(timeit.repeat(lambda: run(_ckernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: run(_pykernels), number=1, repeat=args.repeat))
        diff = _rel_diff(run(_ckernels), run(_pykernels))
        print(f"{name:18s} {1e3 * tc:12.3f} {1e3 * tp:12.3f} {tp / tc:9.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
