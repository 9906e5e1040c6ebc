"""Compare the compiled Sturm-bisection kernel with the numpy fallback.

    python3 benchmarks/bench_sturm.py [--sizes 2000 8000 32000] [--count 10] [--repeat 3]

Both kernels solve the same finite-difference Hamiltonian of a Morse well
(V0 = 50, a = 1) for its lowest ``count`` eigenvalues; the table reports the
best-of-``repeat`` wall time and the largest disagreement between kernels.
"""

import argparse
import time

import numpy as np

from bsq.oracle import GridSettings, _hamiltonian, _sturm_py
from bsq.potentials import Morse

try:
    from bsq.oracle import _sturm
except ImportError:  # extension not built
    _sturm = None


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2000, 8000, 32000])
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    spec = Morse(V0=50.0, a=1.0)
    kernels = [("python", _sturm_py)] + ([("cython", _sturm)] if _sturm else [])
    if _sturm is None:
        print("compiled kernel unavailable; timing the numpy fallback only")

    print(f"{'points':>8} " + " ".join(f"{name + ' [s]':>12}" for name, _ in kernels)
          + f" {'speedup':>9} {'max |diff|':>11}")
    for n in args.sizes:
        d, e2, t = _hamiltonian(spec, GridSettings(-3.0, 30.0, n))
        lo, hi = float(d.min() - 2 * t), float(d.max() + 2 * t)
        times, values = [], []
        for _, mod in kernels:
            dt, vals = _best(lambda: mod.bisect_eigenvalues(d, e2, 0, args.count, lo, hi, 0.0), args.repeat)
            times.append(dt)
            values.append(np.asarray(vals))
        speed = times[0] / times[-1] if len(times) > 1 else float("nan")
        diff = float(np.max(np.abs(values[0] - values[-1])))
        print(f"{n:>8} " + " ".join(f"{x:>12.4f}" for x in times) + f" {speed:>9.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
