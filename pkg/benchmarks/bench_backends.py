"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 5]

Both backends must give identical answers; the script aborts otherwise.
"""
import argparse
import time

import numpy as np

from pdsm import GenSpec, generate, gs, run_elemental, verify
from pdsm._accel import HAS_NUMBA
from pdsm.elemental import path_tree


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def gs_case(inst, backend):
    b = gs(inst, 0, 1, backend=backend)
    return b.pairs.tolist(), b.rounds_used


def verify_case(inst, m, backend):
    r = verify(inst, m, backend=backend)
    return r.stable, r.candidates_checked, r.witnesses


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    cases = []
    for n in (16, 64, 256, 1024):
        inst = generate(GenSpec(2, n, n))
        inst.ranks  # cached; keep it out of the timings
        cases.append((f"gs n={n}", lambda be, inst=inst: gs_case(inst, be)))
    for p, n in ((3, 20), (4, 12), (5, 8), (6, 6)):
        inst = generate(GenSpec(p, n, 7))
        m = run_elemental(inst, path_tree(p)).matching
        cases.append((f"verify p={p} n={n}", lambda be, inst=inst, m=m: verify_case(inst, m, be)))

    print(f"{'case':<20}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, fn in cases:
        fn("numba")  # compile / warm cache
        t_jit, a = best_of(lambda: fn("numba"), args.repeat)
        t_np, b = best_of(lambda: fn("numpy"), args.repeat)
        if a != b:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<20}{t_jit:>12.5f}{t_np:>12.5f}{t_np / t_jit:>9.1f}x")


if __name__ == "__main__":
    np.seterr(all="raise")
    main()
