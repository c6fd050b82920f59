"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Each case runs once untimed (JIT compile), then the best of ``--repeat`` runs
is reported.  A final row times a full catalog verification with each backend
in a subprocess, since the backend is fixed at import time.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from bicomplex_laplace import kernels
from bicomplex_laplace._jit import NUMBA_INSTALLED


def cases():
    rng = np.random.default_rng(0)
    poly = rng.normal(size=17) + 1j * rng.normal(size=17)
    pts = rng.normal(size=200_000) + 1j * rng.normal(size=200_000)
    num = np.array([0.5, 1.0], dtype=np.complex128)
    den = np.array([4.25, 1.0, 1.0], dtype=np.complex128)
    deg = 40
    monic = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    monic /= monic[-1]
    z0 = 1.5 * np.exp(2j * np.pi * (np.arange(deg) + 0.25) / deg)
    return [
        ("horner deg16 x 2e5", kernels.horner_jit, kernels._horner_np, (poly, pts)),
        ("bromwich line n=2e5", kernels.bromwich_line_jit, kernels._bromwich_line_np,
         (num, den, 1.0, 2.0, 0.005, 200_000, False)),
        ("aberth deg40", kernels.aberth_jit, kernels._aberth_np, (monic, z0, 500, 1e-14)),
    ]


def best(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def end_to_end(disable):
    env = dict(os.environ, BICOMPLEX_LAPLACE_DISABLE_NUMBA="1" if disable else "0")
    code = ("import time; from bicomplex_laplace.cli import main; import io, contextlib;"
            "t=time.perf_counter(); buf=io.StringIO()\n"
            "with contextlib.redirect_stdout(buf): main(['pairs'])\n"
            "print(time.perf_counter()-t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_INSTALLED:
        sys.exit("numba is not installed; nothing to compare")

    print(f"{'case':<24}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, jit_fn, np_fn, fargs in cases():
        a, b = best(jit_fn, fargs, args.repeat), best(np_fn, fargs, args.repeat)
        print(f"{name:<24}{a * 1e3:>12.2f}{b * 1e3:>12.2f}{b / a:>9.1f}x")
    a, b = end_to_end(False), end_to_end(True)
    print(f"{'pairs (end to end)':<24}{a * 1e3:>12.0f}{b * 1e3:>12.0f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
