"""Time each kernel's numba path against its numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both paths are called directly, so one process measures both regardless of
BLINDCOUNTER_DISABLE_NUMBA. Each numba kernel is run once before timing to
exclude compilation. Results are checked for equality before being reported.
"""

import argparse
import time

import numpy as np

from blindcounter import kernels as K


def _cases():
    words2, lens2 = K.all_words(4, 8)
    trans = np.array([[0, 0, 0, 0]], dtype=np.int64)
    inc = np.array([[[1, 0], [0, 1], [-1, 0], [0, -1]]], dtype=np.int64)
    det = (trans, inc, 0, np.array([True]), words2, lens2)

    words6, lens6 = K.all_words(6, 7)
    wordsxy, lensxy = K.all_words(2, 18)

    # the first three images sum to zero, so no pruning functional exists
    images = np.array([[1, -1, 0], [-1, 0, 1], [0, 1, -1], [1, 1, 1], [2, 0, 1]], dtype=np.int64)
    center = np.zeros(3, dtype=np.int64)
    f = K.positive_functional(images)
    lim = int(np.abs(f).max()) * 6
    ball = (images, 24, center, 6, f, lim)

    return [
        ("run_deterministic (4 letters, len<=8)", K._run_det_nb, K._run_det_numpy, det),
        ("heisenberg_batch (6 letters, len<=7)", K._heis_nb, K._heis_numpy,
         (words6, lens6, K.HEIS_STEPS)),
        ("exchange_index_batch (len<=18)", K._exchange_nb, K._exchange_numpy, (wordsxy, lensxy)),
        ("shell_points (n=4, r=14)", K._shell_nb, K._shell_numpy, (4, 14)),
        ("image_ball (p=5, n=3, ubound=24)", K._image_ball_nb, K._image_ball_numpy, ball),
    ]


def _time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not K.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<40} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, nb, npy, a in _cases():
        nb(*a)
        t_nb, r_nb = _time(nb, a, args.repeat)
        t_np, r_np = _time(npy, a, args.repeat)
        if not np.array_equal(r_nb, r_np):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<40} {t_nb:>10.4f} {t_np:>10.4f} {t_np / max(t_nb, 1e-9):>7.1f}x")


if __name__ == "__main__":
    main()
