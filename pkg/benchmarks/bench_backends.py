#!/usr/bin/env python3
"""Compare the numba-jitted kernels against the interpreted fallback.

Times the three adder passes, the signed cancel pass, a transducer scan
and a full addition at several sizes on both backends and prints a
speedup table.  Run directly:

    python3 benchmarks/bench_backends.py [--sizes 1000,10000,100000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from zeckarith import accel, adder, core, signed
from zeckarith import automaton as am


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def build_cases(n: int, rng):
    a = core.random_canonical(n, rng)
    b = core.random_canonical(max(1, n - 1), rng)
    work = adder.digitwise_sum(a, b)
    stage1_out = adder.stage1_eliminate(work)
    rl_out = adder.stage2_right_to_left(stage1_out)
    _, tern = signed.detect_and_orient(signed.digitwise_diff(a, b))
    scan_machine = am.compile_pass("stage1")
    return {
        "stage1": lambda: adder.stage1_eliminate(work),
        "stage2_rl": lambda: adder.stage2_right_to_left(stage1_out),
        "stage2_lr": lambda: adder.stage2_left_to_right(rl_out),
        "signed_prelim": lambda: signed.preliminary_pass(tern),
        "scan(stage1)": lambda: am.run_scan(scan_machine, work),
        "add(a,b)": lambda: adder.add(a, b),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0xBE7C)

    print(f"{'case':<22}{'n':>8}{'numba ms':>12}{'python ms':>12}{'speedup':>9}")
    for n in sizes:
        cases = build_cases(n, rng)
        for name, fn in cases.items():
            accel.use_jit(True)
            fn()  # warm-up / compile
            t_jit = timeit(fn, args.repeat)
            accel.use_jit(False)
            t_py = timeit(fn, args.repeat)
            accel.use_jit(True)
            print(
                f"{name:<22}{n:>8}{t_jit * 1e3:>12.3f}{t_py * 1e3:>12.3f}"
                f"{t_py / t_jit:>9.1f}"
            )


if __name__ == "__main__":
    main()
