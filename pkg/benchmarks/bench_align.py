"""Compare the numba and pure-numpy alignment kernels.

    python3 benchmarks/bench_align.py [--sizes 200 1000 3000] [--repeat 5]

Both paths must return identical edit scripts; the script aborts otherwise.
Timings exclude the first (JIT-compiling) numba call.
"""
import argparse
import time

import numpy as np

from transcript_diffs._kernels import HAVE_NUMBA, edit_ops


def make_pair(n, vocab, rate, rng):
    ref = rng.integers(0, vocab, n)
    hyp = ref.copy()
    flip = rng.random(n) < rate
    hyp[flip] = rng.integers(0, vocab, int(flip.sum()))
    keep = rng.random(n) > rate / 2
    return ref.astype(np.int64), hyp[keep].astype(np.int64)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[200, 1000, 3000])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--vocab", type=int, default=500)
    p.add_argument("--rate", type=float, default=0.15, help="per-token perturbation rate")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(args.seed)
    edit_ops(np.arange(3), np.arange(2), use_numba=True)  # compile

    print(f"{'n':>6} {'m':>6} {'cells':>12} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for n in args.sizes:
        a, b = make_pair(n, args.vocab, args.rate, rng)
        t_nb, r_nb = best_of(lambda: edit_ops(a, b, use_numba=True), args.repeat)
        t_np, r_np = best_of(lambda: edit_ops(a, b, use_numba=False), args.repeat)
        if r_nb[0] != r_np[0] or list(r_nb[1]) != list(r_np[1]):
            raise SystemExit(f"kernel mismatch at n={n}")
        cells = (len(a) + 1) * (len(b) + 1)
        print(f"{len(a):>6} {len(b):>6} {cells:>12,} {t_nb * 1e3:>10.2f} {t_np * 1e3:>10.2f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
