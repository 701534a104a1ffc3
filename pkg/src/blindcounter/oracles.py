"""Brute-force reference implementations and random instance generators.

These share no decision code with the library: acceptance is a
breadth-first search over configurations with the counters confined to a
box, semilinear membership is exhaustive coefficient enumeration, and Cho
acceptance walks every path. They are slow and only complete up to their
box parameters, which is why the generators keep instances small.
"""

from __future__ import annotations

import random
from collections import deque
from itertools import product
from typing import Sequence

from . import kernels
from .blind import Alphabet, BlindAutomaton, Edge
from .cho import ChoAutomaton
from .semilinear import LinearMap, LinearSet, SemilinearSet, vsub


def bfs_accept(A: BlindAutomaton, w: Sequence[str], box: int = 14) -> bool:
    """Search (position, state, counters) with every counter kept in [-box, box]."""
    w = tuple(w)
    start = (0, A.initial, (0,) * A.dim)
    seen = {start}
    queue = deque([start])
    while queue:
        i, q, c = queue.popleft()
        if i == len(w) and q in A.terminals and not any(c):
            return True
        for e in A.edges:
            if e.src != q:
                continue
            if e.input is None:
                j = i
            elif i < len(w) and e.input == w[i]:
                j = i + 1
            else:
                continue
            c2 = tuple(x + y for x, y in zip(c, e.inc))
            if max(map(abs, c2), default=0) > box:
                continue
            nxt = (j, e.dst, c2)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def cho_paths_accept(B: ChoAutomaton, w: Sequence[str], ubound: int = 30) -> bool:
    """Walk every path reading w and test the end vector against the accept set."""
    def walk(q, i, v):
        if i == len(w):
            return linear_union_contains(B.accept_sets[q], v, ubound)
        return any(walk(e.dst, i + 1, tuple(a + b for a, b in zip(v, e.inc)))
                   for e in B.edges if e.src == q and e.input == w[i])
    return walk(B.initial, 0, (0,) * B.k)


def linear_contains(L: LinearSet, v: Sequence[int], ubound: int) -> bool:
    """Is v = offset + sum lambda_i periods_i with sum lambda_i <= ubound?"""
    d = vsub(v, L.offset)
    if not L.periods:
        return not any(d)
    return d in kernels.image_ball(L.periods, ubound, d, 0)


def linear_union_contains(S: SemilinearSet, v: Sequence[int], ubound: int) -> bool:
    return any(linear_contains(c, v, ubound) for c in S)


def meets(S: SemilinearSet, T: SemilinearSet, ubound: int) -> bool:
    """Do some component pair's coefficients of total size <= ubound give a common point?"""
    for a in S:
        for b in T:
            d = vsub(b.offset, a.offset)
            images = tuple(a.periods) + tuple(tuple(-x for x in p) for p in b.periods)
            if not images:
                if not any(d):
                    return True
                continue
            if d in kernels.image_ball(images, ubound, d, 0):
                return True
    return False


def preimage_image(sigma: LinearMap, ubound: int, radius: int) -> set:
    """All v with |v| <= radius equal to sigma(u) for some u in N^p, |u| <= ubound."""
    return kernels.image_ball(sigma.images, ubound, (0,) * sigma.codomain_dim, radius)


# ---------------------------------------------------------------------------
# random instances


def _vec(rng: random.Random, n: int, lo: int, hi: int) -> tuple[int, ...]:
    return tuple(rng.randint(lo, hi) for _ in range(n))


def random_linear_map(rng: random.Random, pmax: int = 4, nmax: int = 4, entry: int = 3) -> LinearMap:
    p, n = rng.randint(1, pmax), rng.randint(1, nmax)
    return LinearMap(tuple(_vec(rng, n, -entry, entry) for _ in range(p)), n)


def _bounded_vec(rng, n, bound, nonneg=False):
    """Random vector with Manhattan norm at most ``bound``."""
    while True:
        v = _vec(rng, n, 0 if nonneg else -bound, bound)
        if sum(map(abs, v)) <= bound:
            return v


def random_semilinear(rng: random.Random, n: int, comps: int = 2, periods: int = 2,
                      gen_bound: int = 3, const_bound: int = 6, nonneg: bool = False) -> SemilinearSet:
    out = []
    for _ in range(rng.randint(1, comps)):
        off = _bounded_vec(rng, n, const_bound, nonneg)
        ps = tuple(_bounded_vec(rng, n, gen_bound, nonneg) for _ in range(rng.randint(0, periods)))
        out.append(LinearSet(off, ps))
    return SemilinearSet(n, tuple(out))


def random_blind(rng: random.Random, max_states: int = 3, max_dim: int = 2,
                 max_edges: int = 6) -> BlindAutomaton:
    alphabet = Alphabet.from_generators("a")
    ns, n = rng.randint(1, max_states), rng.randint(1, max_dim)
    states = tuple(range(ns))
    edges = tuple(Edge(rng.randrange(ns), _vec(rng, n, -1, 1), rng.choice([None, "a", "a'"]),
                       rng.randrange(ns)) for _ in range(rng.randint(1, max_edges)))
    terminals = frozenset(q for q in states if rng.random() < 0.5)
    return BlindAutomaton(n, alphabet, states, 0, terminals, edges)


def random_det_blind(rng: random.Random, max_states: int = 3, max_dim: int = 2) -> BlindAutomaton:
    alphabet = Alphabet.from_generators("a")
    ns, n = rng.randint(1, max_states), rng.randint(1, max_dim)
    states = tuple(range(ns))
    edges = []
    for q, x in product(states, alphabet):
        if rng.random() < 0.8:
            edges.append(Edge(q, _vec(rng, n, -1, 1), x, rng.randrange(ns)))
    terminals = frozenset(q for q in states if rng.random() < 0.6)
    return BlindAutomaton(n, alphabet, states, 0, terminals, tuple(edges))


def random_cho(rng: random.Random, max_states: int = 3, max_k: int = 2, max_edges: int = 6) -> ChoAutomaton:
    alphabet = Alphabet.from_generators("a")
    ns, k = rng.randint(1, max_states), rng.randint(1, max_k)
    states = tuple(range(ns))
    edges = tuple(Edge(rng.randrange(ns), _vec(rng, k, 0, 1), rng.choice(["a", "a'"]),
                       rng.randrange(ns)) for _ in range(rng.randint(1, max_edges)))
    sets = {}
    for q in states:
        if rng.random() < 0.7:
            sets[q] = random_semilinear(rng, k, comps=2, periods=2, gen_bound=2, const_bound=3,
                                        nonneg=True)
    return ChoAutomaton(k, alphabet, states, 0, edges, sets)


def words(letters: Sequence[str], maxlen: int):
    for length in range(maxlen + 1):
        yield from product(letters, repeat=length)
