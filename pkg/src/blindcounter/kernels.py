"""Hot loops: batch word runs, lattice shells, bounded image enumeration.

Each kernel has two implementations with identical results: a loop version
compiled with numba, and a numpy/pure-Python fallback. The numba path is
used when numba imports and BLINDCOUNTER_DISABLE_NUMBA is unset.
``benchmarks/bench_kernels.py`` times both.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .config import use_numba

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_AVAILABLE = numba is not None
ENABLED = NUMBA_AVAILABLE and use_numba()


def _njit(fn):
    if not NUMBA_AVAILABLE:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


def backend() -> str:
    return "numba" if ENABLED else "numpy"


# ---------------------------------------------------------------------------
# word enumeration


def all_words(k: int, maxlen: int) -> tuple[np.ndarray, np.ndarray]:
    """Every word of length 0..maxlen over letters 0..k-1, shortlex order.

    Returns (codes, lengths); codes is padded with -1.
    """
    blocks, lens = [], []
    for length in range(maxlen + 1):
        if length == 0:
            block = np.full((1, maxlen), -1, dtype=np.int64)
        else:
            grid = np.indices((k,) * length).reshape(length, -1).T
            block = np.full((grid.shape[0], maxlen), -1, dtype=np.int64)
            block[:, :length] = grid
        blocks.append(block)
        lens.append(np.full(block.shape[0], length, dtype=np.int64))
    codes = np.concatenate(blocks) if blocks else np.zeros((0, maxlen), dtype=np.int64)
    return codes, np.concatenate(lens)


# ---------------------------------------------------------------------------
# deterministic blind automaton over a batch of words


def _run_det_loops(trans, inc, init, terminal, words, lengths):
    W = words.shape[0]
    n = inc.shape[2]
    out = np.zeros(W, dtype=np.bool_)
    cnt = np.zeros(n, dtype=np.int64)
    for w in range(W):
        s = init
        ok = True
        for k in range(n):
            cnt[k] = 0
        for t in range(lengths[w]):
            a = words[w, t]
            nxt = trans[s, a]
            if nxt < 0:
                ok = False
                break
            for k in range(n):
                cnt[k] += inc[s, a, k]
            s = nxt
        if ok and terminal[s]:
            zero = True
            for k in range(n):
                if cnt[k] != 0:
                    zero = False
                    break
            out[w] = zero
    return out


def _run_det_numpy(trans, inc, init, terminal, words, lengths):
    W = words.shape[0]
    state = np.full(W, init, dtype=np.int64)
    alive = np.ones(W, dtype=bool)
    cnt = np.zeros((W, inc.shape[2]), dtype=np.int64)
    for t in range(words.shape[1]):
        act = alive & (lengths > t)
        if not act.any():
            break
        idx = np.nonzero(act)[0]
        a = words[idx, t]
        s = state[idx]
        nxt = trans[s, a]
        dead = nxt < 0
        alive[idx[dead]] = False
        keep = idx[~dead]
        cnt[keep] += inc[s[~dead], a[~dead]]
        state[keep] = nxt[~dead]
    return alive & terminal[state] & ~cnt.any(axis=1)


_run_det_nb = _njit(_run_det_loops)


def run_deterministic(trans, inc, init, terminal, words, lengths) -> np.ndarray:
    """Accept flags for a deterministic Z^n-automaton without epsilon edges.

    trans[s, a] is the target state (-1 if none), inc[s, a] the increment.
    """
    args = (np.ascontiguousarray(trans, dtype=np.int64),
            np.ascontiguousarray(inc, dtype=np.int64), int(init),
            np.ascontiguousarray(terminal, dtype=np.bool_),
            np.ascontiguousarray(words, dtype=np.int64),
            np.ascontiguousarray(lengths, dtype=np.int64))
    if ENABLED:
        return _run_det_nb(*args)
    return _run_det_numpy(*args)


# ---------------------------------------------------------------------------
# Heisenberg words and exchange indices
# letter codes: 0 x, 1 y, 2 z, 3 x', 4 y', 5 z'

HEIS_STEPS = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1],
                       [-1, 0, 0], [0, -1, 0], [0, 0, -1]], dtype=np.int64)


def _heis_loops(words, lengths, steps):
    W = words.shape[0]
    out = np.zeros((W, 3), dtype=np.int64)
    for w in range(W):
        a = 0
        b = 0
        c = 0
        for t in range(lengths[w]):
            s = words[w, t]
            c += steps[s, 2] + a * steps[s, 1]
            a += steps[s, 0]
            b += steps[s, 1]
        out[w, 0] = a
        out[w, 1] = b
        out[w, 2] = c
    return out


def _heis_numpy(words, lengths, steps):
    W = words.shape[0]
    a = np.zeros(W, dtype=np.int64)
    b = np.zeros(W, dtype=np.int64)
    c = np.zeros(W, dtype=np.int64)
    for t in range(words.shape[1]):
        act = lengths > t
        st = steps[np.where(act, words[:, t], 0)] * act[:, None]
        c += st[:, 2] + a * st[:, 1]
        a += st[:, 0]
        b += st[:, 1]
    return np.stack([a, b, c], axis=1)


_heis_nb = _njit(_heis_loops)


def heisenberg_batch(words, lengths) -> np.ndarray:
    """(a, b, c) coordinates of each word's product of unitriangular matrices."""
    words = np.ascontiguousarray(words, dtype=np.int64)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    if ENABLED:
        return _heis_nb(words, lengths, HEIS_STEPS)
    return _heis_numpy(words, lengths, HEIS_STEPS)


def _exchange_loops(words, lengths):
    W = words.shape[0]
    out = np.zeros(W, dtype=np.int64)
    for w in range(W):
        ys = 0
        total = 0
        for t in range(lengths[w]):
            if words[w, t] == 1:
                ys += 1
            else:
                total += ys
        out[w] = total
    return out


def _exchange_numpy(words, lengths):
    mask = np.arange(words.shape[1])[None, :] < lengths[:, None]
    ys = np.cumsum((words == 1) & mask, axis=1)
    return np.where((words == 0) & mask, ys, 0).sum(axis=1)


_exchange_nb = _njit(_exchange_loops)


def exchange_index_batch(words, lengths) -> np.ndarray:
    """Inversion counts (y before x) for words coded 0 = x, 1 = y."""
    words = np.ascontiguousarray(words, dtype=np.int64)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    if ENABLED:
        return _exchange_nb(words, lengths)
    return _exchange_numpy(words, lengths)


# ---------------------------------------------------------------------------
# lattice shells {v in Z^n : |v| = r}


def _shell_fill(n, r, out):
    # odometer over the first n-1 coordinates, each confined to what is left of
    # the norm budget; the last coordinate is then -rem or +rem. Lexicographic.
    # Returns the number of points; writes them when out has rows.
    m = n - 1
    x = np.zeros(n, dtype=np.int64)
    rem = np.zeros(n, dtype=np.int64)  # rem[j]: budget left before coordinate j
    rem[0] = r
    for j in range(m):
        x[j] = -rem[j]
        rem[j + 1] = rem[j] - abs(x[j])
    count = 0
    while True:
        last = rem[m]
        for sign in (-1, 1):
            if sign == 1 and last == 0:
                break
            if out.shape[0] > 0:
                for j in range(m):
                    out[count, j] = x[j]
                out[count, m] = sign * last
            count += 1
        j = m - 1
        while j >= 0 and x[j] >= rem[j]:
            j -= 1
        if j < 0:
            return count
        x[j] += 1
        rem[j + 1] = rem[j] - abs(x[j])
        for k in range(j + 1, m):
            x[k] = -rem[k]
            rem[k + 1] = rem[k] - abs(x[k])


def _shell_loops(n, r):
    count = _shell_fill(n, r, np.zeros((0, n), dtype=np.int64))
    out = np.zeros((count, n), dtype=np.int64)
    _shell_fill(n, r, out)
    return out


def _shell_numpy(n, r):
    if n == 0:
        return np.zeros((1 if r == 0 else 0, 0), dtype=np.int64)
    pts = np.indices((2 * r + 1,) * n).reshape(n, -1).T - r
    return np.ascontiguousarray(pts[np.abs(pts).sum(axis=1) == r], dtype=np.int64)


_shell_fill = _njit(_shell_fill) or _shell_fill
_shell_nb = _njit(_shell_loops)


@lru_cache(maxsize=256)
def shell_points(n: int, r: int) -> np.ndarray:
    """All integer points of Manhattan norm exactly r, lexicographic order."""
    if n == 0:
        out = np.zeros((1 if r == 0 else 0, 0), dtype=np.int64)
    elif ENABLED:
        out = _shell_nb(n, r)
    else:
        out = _shell_numpy(n, r)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# bounded image enumeration: which v with |v - center| <= radius are sigma(u)
# for some u in N^p with |u| <= ubound?


def _image_ball_loops(images, ubound, center, radius, f, lim):
    p = images.shape[0]
    n = center.shape[0]
    side = 2 * radius + 1
    size = 1
    for k in range(n):
        size *= side
    out = np.zeros(size, dtype=np.bool_)
    d = np.zeros(n, dtype=np.int64)
    for k in range(n):
        d[k] = -center[k]
    if p == 0:
        s = 0
        for k in range(n):
            s += abs(d[k])
        if s <= radius:
            idx = 0
            for k in range(n):
                idx = idx * side + d[k] + radius
            out[idx] = True
        return out
    q = p - 1
    u = np.zeros(max(q, 1), dtype=np.int64)
    y = images[q]
    total = 0
    v = np.zeros(n, dtype=np.int64)
    while True:
        rem = ubound - total
        lo = 0
        hi = rem
        for k in range(n):
            a = d[k]
            b = y[k]
            if b == 0:
                if abs(a) > radius:
                    lo = 1
                    hi = 0
                    break
            elif b > 0:
                lo = max(lo, -((radius + a) // b))
                hi = min(hi, (radius - a) // b)
            else:
                lo = max(lo, -((radius - a) // (-b)))
                hi = min(hi, (a + radius) // (-b))
        for t in range(lo, hi + 1):
            s = 0
            for k in range(n):
                v[k] = d[k] + t * y[k]
                s += abs(v[k])
            if s <= radius:
                idx = 0
                for k in range(n):
                    idx = idx * side + v[k] + radius
                out[idx] = True
        j = q - 1
        while j >= 0:
            if total < ubound:
                u[j] += 1
                total += 1
                fd = 0
                for k in range(n):
                    d[k] += images[j, k]
                    fd += f[k] * d[k]
                if fd <= lim:
                    break
                # every image has f > 0, so larger u[j] cannot come back
            total -= u[j]
            for k in range(n):
                d[k] -= u[j] * images[j, k]
            u[j] = 0
            j -= 1
        if j < 0:
            break
    return out


def _image_ball_numpy(images, ubound, center, radius, f, lim):
    p = images.shape[0]
    n = center.shape[0]
    side = 2 * radius + 1
    out = np.zeros(side ** n, dtype=bool)
    weights = side ** np.arange(n - 1, -1, -1, dtype=np.int64)
    d0 = -center
    if p == 0:
        if np.abs(d0).sum() <= radius:
            out[int(((d0 + radius) * weights).sum())] = True
        return out
    y = images[-1]
    q = p - 1

    fx = images @ f
    fd0 = int(f @ d0)

    def prefixes(count, budget, fd):
        if count == 0:
            yield ()
            return
        step = int(fx[q - 1 - count])
        for a in range(budget + 1):
            if fd + a * step > lim:
                break
            for rest in prefixes(count - 1, budget - a, fd + a * step):
                yield (a,) + rest

    # the last two coordinates are vectorized, earlier ones looped
    for pre in prefixes(max(q - 1, 0), ubound, fd0):
        used = sum(pre)
        dpre = d0 + (np.array(pre, dtype=np.int64) @ images[:len(pre)] if pre else 0)
        budget = ubound - used
        if q >= 1:
            a = np.arange(budget + 1, dtype=np.int64)
            dd = dpre[None, :] + a[:, None] * images[q - 1][None, :]
            rems = budget - a
        else:
            dd = np.atleast_2d(dpre)
            rems = np.array([budget], dtype=np.int64)
        lo = np.zeros(len(rems), dtype=np.int64)
        hi = rems.copy()
        for k in range(n):
            b = y[k]
            col = dd[:, k]
            if b == 0:
                bad = np.abs(col) > radius
                hi[bad] = -1
            elif b > 0:
                lo = np.maximum(lo, -((radius + col) // b))
                hi = np.minimum(hi, (radius - col) // b)
            else:
                lo = np.maximum(lo, -((radius - col) // (-b)))
                hi = np.minimum(hi, (col + radius) // (-b))
        cnt = np.maximum(hi - lo + 1, 0)
        if cnt.sum() == 0:
            continue
        rows = np.repeat(np.arange(len(cnt)), cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        t = lo[rows] + offs
        pts = dd[rows] + t[:, None] * y[None, :]
        pts = pts[np.abs(pts).sum(axis=1) <= radius]
        out[((pts + radius) * weights).sum(axis=1)] = True
    return out


_image_ball_nb = _njit(_image_ball_loops)


def positive_functional(images, max_steps: int = 2000) -> np.ndarray:
    """An integer f with f . x > 0 for every image x, or zeros if none is found.

    Such an f exists exactly when no nonzero nonnegative combination of the
    images vanishes. Found by perceptron updates, which terminate on
    separable input; ``max_steps`` caps the rare slow case.
    """
    images = np.asarray(images, dtype=np.int64)
    n = images.shape[1] if images.ndim == 2 else 0
    if images.shape[0] == 0 or n == 0:
        return np.zeros(n, dtype=np.int64)
    key = tuple(map(tuple, images.tolist()))
    return np.array(_perceptron(key, n, max_steps), dtype=np.int64)


@lru_cache(maxsize=4096)
def _perceptron(key, n, max_steps):
    images = np.array(key, dtype=np.int64)
    f = np.zeros(n, dtype=np.int64)
    for _ in range(max_steps):
        bad = np.nonzero(images @ f <= 0)[0]
        if len(bad) == 0:
            return tuple(f.tolist())
        f = f + images[bad[0]]
    return (0,) * n


def image_ball(images, ubound: int, center, radius: int) -> set:
    """Points v with |v - center| <= radius reachable as sigma(u), u in N^p, |u| <= ubound.

    Returns a set of int tuples. Complete up to ``ubound`` by exhaustion:
    the first p-1 coordinates are enumerated and the admissible range of
    the last one is solved for directly. When some f is positive on every
    image, prefixes with f . (partial sum - center) > max|f| * radius are
    cut, since later terms only push f further up.
    """
    center = np.asarray(center, dtype=np.int64).reshape(-1)
    n = center.shape[0]
    images = np.asarray(images, dtype=np.int64).reshape(-1, n)
    radius = int(radius)
    ubound = int(ubound)
    f = positive_functional(images)
    lim = int(np.abs(f).max(initial=0)) * radius
    if ENABLED:
        flags = _image_ball_nb(np.ascontiguousarray(images), ubound, center, radius, f, lim)
    else:
        flags = _image_ball_numpy(images, ubound, center, radius, f, lim)
    side = 2 * radius + 1
    idx = np.nonzero(flags)[0]
    pts = set()
    for i in idx:
        i = int(i)
        coords = []
        for _ in range(n):
            coords.append(i % side - radius)
            i //= side
        pts.add(tuple(int(c + o) for c, o in zip(reversed(coords), center)))
    return pts
