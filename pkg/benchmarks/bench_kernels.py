"""Time the Monte Carlo kernels on each available backend.

    python3 benchmarks/bench_kernels.py [--trials 15000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from ris_subarray import kernels


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=15_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    keys = kernels.trial_keys(1, 1, np.arange(args.trials, dtype=np.uint64))
    cases = [
        ("max_snr_batch N=1", lambda k: k.max_snr_batch(keys, 1e-9, 1e-11, 1)),
        ("max_snr_batch N=64", lambda k: k.max_snr_batch(keys, 1e-9, 1e-11, 64)),
        ("max_snr_batch N=1024", lambda k: k.max_snr_batch(keys, 1e-9, 1e-11, 1024)),
        ("complex_normal_batch 2x1025", lambda k: k.complex_normal_batch(keys, 0, 2050, 1.0)),
    ]

    names = sorted(kernels.BACKENDS)
    print(f"trials={args.trials} repeat={args.repeat} active={kernels.BACKEND}")
    print(f"{'kernel':30s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases:
        best = {}
        for name in names:
            mod = kernels.get_backend(name)
            fn(mod)  # warm up
            best[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        line = f"{label:30s}" + "".join(f"{best[n] * 1e3:10.1f}ms" for n in names)
        if "cython" in best and "python" in best:
            line += f"{best['python'] / best['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
