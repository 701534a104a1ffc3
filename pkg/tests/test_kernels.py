"""Both kernel paths against each other and against plain Python."""

import os
import subprocess
import sys
from itertools import product

import numpy as np
import pytest

from blindcounter import kernels as K

needs_numba = pytest.mark.skipif(not K.NUMBA_AVAILABLE, reason="numba not installed")


def test_all_words_shortlex():
    codes, lengths = K.all_words(2, 2)
    got = [tuple(c[:n]) for c, n in zip(codes.tolist(), lengths.tolist())]
    assert got == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]


def test_all_words_count():
    codes, _ = K.all_words(4, 8)
    assert len(codes) == sum(4 ** k for k in range(9))


def _det_example():
    # Z^1 with a: +1, a': -1, plus a dead second state reached on nothing
    trans = np.array([[0, 0], [-1, -1]])
    inc = np.array([[[1], [-1]], [[0], [0]]])
    return trans, inc, 0, np.array([True, False])


def test_run_deterministic_paths_agree():
    codes, lengths = K.all_words(2, 6)
    args = (*_det_example(), codes, lengths)
    expect = np.array([(c[:n] == 0).sum() * 2 == n for c, n in zip(codes, lengths)])
    assert (K._run_det_numpy(*args) == expect).all()
    assert (K._run_det_loops(*args) == expect).all()
    if K.NUMBA_AVAILABLE:
        assert (K._run_det_nb(*args) == expect).all()


def _heis_python(word):
    a = b = c = 0
    step = {0: (1, 0, 0), 1: (0, 1, 0), 2: (0, 0, 1), 3: (-1, 0, 0), 4: (0, -1, 0), 5: (0, 0, -1)}
    for x in word:
        da, db, dc = step[x]
        a, b, c = a + da, b + db, c + dc + a * db
    return (a, b, c)


def test_heisenberg_batch_paths():
    codes, lengths = K.all_words(6, 4)
    expect = np.array([_heis_python(c[:n]) for c, n in zip(codes.tolist(), lengths.tolist())])
    assert (K._heis_numpy(codes, lengths, K.HEIS_STEPS) == expect).all()
    assert (K._heis_loops(codes, lengths, K.HEIS_STEPS) == expect).all()
    assert (K.heisenberg_batch(codes, lengths) == expect).all()


def test_exchange_batch_paths():
    codes, lengths = K.all_words(2, 8)
    expect = [sum(1 for i in range(n) for j in range(i + 1, n) if c[i] == 1 and c[j] == 0)
              for c, n in zip(codes.tolist(), lengths.tolist())]
    for fn in (K._exchange_numpy, K._exchange_loops, K.exchange_index_batch):
        assert fn(codes, lengths).tolist() == expect


@pytest.mark.parametrize("n,r", [(1, 0), (1, 3), (2, 2), (3, 3), (4, 2)])
def test_shell_points(n, r):
    expect = sorted(v for v in product(range(-r, r + 1), repeat=n) if sum(map(abs, v)) == r)
    pts = K.shell_points(n, r)
    assert [tuple(p) for p in pts.tolist()] == expect
    assert [tuple(p) for p in K._shell_numpy(n, r).tolist()] == expect
    assert [tuple(p) for p in K._shell_loops(n, r).tolist()] == expect


def _image_brute(images, ubound, center, radius):
    p, n = len(images), len(center)
    out = set()
    for u in product(range(ubound + 1), repeat=p):
        if sum(u) > ubound:
            continue
        v = tuple(sum(u[i] * images[i][k] for i in range(p)) for k in range(n))
        if sum(abs(v[k] - center[k]) for k in range(n)) <= radius:
            out.add(v)
    return out


def test_image_ball_paths(rng):
    for _ in range(200):
        p, n = rng.randint(0, 4), rng.randint(1, 3)
        images = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(p)]
        center = tuple(rng.randint(-3, 3) for _ in range(n))
        ub, rad = rng.randint(0, 6), rng.randint(0, 4)
        expect = _image_brute(images, ub, center, rad)
        arr = np.array(images, dtype=np.int64).reshape(p, n)
        c = np.array(center, dtype=np.int64)
        f = K.positive_functional(arr) if n else np.zeros(0, dtype=np.int64)
        lim = int(np.abs(f).max(initial=0)) * rad
        variants = [(f, lim), (np.zeros(n, dtype=np.int64), 0)]
        fns = [K._image_ball_numpy, K._image_ball_loops]
        if K.NUMBA_AVAILABLE:
            fns.append(K._image_ball_nb)
        for fn, (ff, ll) in product(fns, variants):
            flags = fn(arr, ub, c, rad, ff, ll)
            side = 2 * rad + 1
            got = set()
            for i in np.nonzero(flags)[0].tolist():
                coords = []
                for _ in range(n):
                    coords.append(i % side - rad)
                    i //= side
                got.add(tuple(x + y for x, y in zip(reversed(coords), center)))
            assert got == expect
        assert K.image_ball(images, ub, center, rad) == expect


@needs_numba
def test_env_flag_selects_numpy():
    code = "from blindcounter import kernels; print(kernels.backend())"
    env = dict(os.environ, BLINDCOUNTER_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
    env.pop("BLINDCOUNTER_DISABLE_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numba"


def test_positive_functional():
    f = K.positive_functional([(1, 0), (0, 1), (1, -1)])
    assert (np.array([(1, 0), (0, 1), (1, -1)]) @ f > 0).all()
    assert not K.positive_functional([(1,), (-1,)]).any()
