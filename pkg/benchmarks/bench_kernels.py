"""Compare the numba and numpy kernels.

Kernel timings call both implementations directly in one process; the
end-to-end timing runs a Groebner basis in two subprocesses, one with
FPP_NUMBA=0, so the selection by environment flag is exercised too.

    python benchmarks/bench_kernels.py [--size 400] [--repeat 3] [--no-e2e]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from fpp import kernels

P = 32003

E2E = """
import time
from fpp import kernels
from fpp.groebner import buchberger
from fpp.multipoly import GF, parse_poly
F = GF(32003)
V = ("a", "b", "c", "d", "e")
gens = [parse_poly(t, V, F) for t in ("a+b+c+d+e", "a*b+b*c+c*d+d*e+e*a", "a*b*c+b*c*d+c*d*e+d*e*a+e*a*b",
        "a*b*c*d+b*c*d*e+c*d*e*a+d*e*a*b+e*a*b*c", "a*b*c*d*e-1")]
buchberger(gens, method="f4")  # warm-up (numba compile / cache load)
t = time.perf_counter()
gb = buchberger(gens, method="f4")
print(kernels.backend(), len(gb), time.perf_counter() - t)
"""


def best(fn, repeat):
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t)
    return min(ts)


def kernel_rows(n, repeat):
    rng = np.random.default_rng(0)
    A = rng.integers(0, P, size=(n, n + 20), dtype=np.int64)
    B = rng.integers(0, P, size=(n + 20, n), dtype=np.int64)
    rows = []
    pairs = [("rref", lambda: kernels._np_rref(A.copy(), P), lambda: kernels._nb_rref(A.copy(), P)),
             ("matmul_mod", lambda: kernels._np_matmul_mod(A, B, P), lambda: kernels._nb_matmul_mod(A, B, P))]
    for name, np_fn, nb_fn in pairs:
        nb_fn()  # compile
        rows.append((name, best(np_fn, repeat), best(nb_fn, repeat)))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--no-e2e", action="store_true")
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        sys.exit("numba is unavailable (or FPP_NUMBA=0); nothing to compare")
    print(f"kernel          size  numpy[s]  numba[s]  speedup")
    for name, t_np, t_nb in kernel_rows(args.size, args.repeat):
        print(f"{name:<14} {args.size:>5}  {t_np:8.4f}  {t_nb:8.4f}  {t_np / t_nb:7.1f}x")
    if args.no_e2e:
        return
    print("\nend to end: cyclic-5 Groebner basis mod 32003 (F4)")
    for flag in ("0", "1"):
        env = dict(os.environ, FPP_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        backend, size, secs = out.stdout.split()
        print(f"FPP_NUMBA={flag}  backend={backend:<6} basis size {size}  {float(secs):.3f}s")


if __name__ == "__main__":
    main()
