"""Cho counter automata and the two conversions to and from blind automata.

A k-counter Cho automaton reads exactly one letter per edge, adds a
vector in N^k, and accepts w when a path from the initial state reading w
ends at a state v with accumulated vector in the semilinear set S_v.
There are no epsilon edges and no terminal states.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .blind import (Alphabet, AutomatonError, BlindAutomaton, Edge, PreconditionError,
                    State, _check_word)
from .config import DEFAULT, ResourceLimitError
from .semilinear import SemilinearSet, vadd, vneg, zero


@dataclass(frozen=True, eq=False)
class ChoAutomaton:
    k: int
    alphabet: Alphabet
    states: tuple
    initial: State
    edges: tuple[Edge, ...]
    accept_sets: Mapping[State, SemilinearSet]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "edges", tuple(self.edges))
        known = set(self.states)
        if len(known) != len(self.states):
            raise AutomatonError("duplicate state names")
        if self.initial not in known:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for e in self.edges:
            if e.src not in known or e.dst not in known:
                raise AutomatonError(f"edge {e} uses an unknown state")
            if e.input is None:
                raise AutomatonError("Cho automata have no epsilon edges")
            if e.input not in self.alphabet:
                raise AutomatonError(f"edge {e} reads unknown letter {e.input!r}")
            if len(e.inc) != self.k or any(x < 0 for x in e.inc):
                raise AutomatonError(f"edge {e} increment is not in N^{self.k}")
        sets = {}
        for q in self.states:
            S = self.accept_sets.get(q, SemilinearSet.empty(self.k))
            if S.dim != self.k:
                raise AutomatonError(f"accept set of {q!r} has dimension {S.dim}")
            for c in S:
                if any(x < 0 for x in c.offset) or any(x < 0 for p in c.periods for x in p):
                    raise AutomatonError(f"accept set of {q!r} leaves N^{self.k}")
            sets[q] = S
        extra = set(self.accept_sets) - known
        if extra:
            raise AutomatonError(f"accept sets given for unknown states {extra}")
        object.__setattr__(self, "accept_sets", sets)

    def __eq__(self, other):
        if not isinstance(other, ChoAutomaton):
            return NotImplemented
        return (self.k, self.alphabet, self.states, self.initial, set(self.edges),
                self.accept_sets) == (other.k, other.alphabet, other.states, other.initial,
                                      set(other.edges), other.accept_sets)

    __hash__ = object.__hash__


def cho_accept(B: ChoAutomaton, w: Sequence[str], cap: int | None = None) -> bool:
    w = _check_word(B, w)
    cap = cap or DEFAULT.vector_set_cap
    out = defaultdict(list)
    for e in B.edges:
        out[e.src, e.input].append(e)
    current = {B.initial: {zero(B.k)}}
    for x in w:
        nxt: dict = defaultdict(set)
        for q, vecs in current.items():
            for e in out[q, x]:
                nxt[e.dst].update(vadd(v, e.inc) for v in vecs)
        size = sum(len(v) for v in nxt.values())
        if size > cap:
            raise ResourceLimitError(f"{size} reachable counter vectors, cap is {cap}")
        current = nxt
        if not current:
            return False
    return any(v in B.accept_sets[q] for q, vecs in current.items() for v in vecs)


def is_deterministic_cho(B: ChoAutomaton) -> bool:
    seen = set()
    for e in B.edges:
        if (e.src, e.input) in seen:
            return False
        seen.add((e.src, e.input))
    return True


def is_deterministic_blind(A: BlindAutomaton) -> bool:
    seen = set()
    for e in A.edges:
        if e.input is None or (e.src, e.input) in seen:
            return False
        seen.add((e.src, e.input))
    return True


def cho_to_blind(B: ChoAutomaton) -> BlindAutomaton:
    """Equivalent Z^k-automaton.

    For each state p and each linear component <v0; v1..vm> of S_p a fresh
    terminal state ``p#i`` is added, entered from p by (-v0, eps) and
    looping on (-vq, eps). Nothing else is terminal.
    """
    states = list(B.states)
    edges = list(B.edges)
    terminals = []
    for p in B.states:
        for i, comp in enumerate(B.accept_sets[p]):
            fresh = f"{p}#{i}"
            if fresh in states:
                raise AutomatonError(f"fresh state name {fresh!r} already used")
            states.append(fresh)
            terminals.append(fresh)
            edges.append(Edge(p, vneg(comp.offset), None, fresh))
            edges.extend(Edge(fresh, vneg(v), None, fresh) for v in comp.periods)
    return BlindAutomaton(B.k, B.alphabet, tuple(states), B.initial, frozenset(terminals), tuple(edges))


def lift(g: Sequence[int]) -> tuple[int, ...]:
    """Canonical preimage in N^2k: positive parts then negative parts, interleaved per coordinate."""
    out = []
    for x in g:
        out.extend((max(x, 0), max(-x, 0)))
    return tuple(out)


def balanced_set(k: int) -> SemilinearSet:
    """Vectors of N^2k that project to zero: <0; e_i + ebar_i>."""
    periods = []
    for i in range(k):
        v = [0] * (2 * k)
        v[2 * i] = v[2 * i + 1] = 1
        periods.append(tuple(v))
    return SemilinearSet.linear(zero(2 * k), periods)


def blind_det_to_cho(A: BlindAutomaton) -> ChoAutomaton:
    """Equivalent deterministic 2k-counter Cho automaton.

    Coordinates come in pairs (v_i, vbar_i); each increment is lifted by
    ``lift`` and terminal states accept the balanced vectors.
    """
    if not is_deterministic_blind(A):
        raise PreconditionError("input must be deterministic with no epsilon edges")
    edges = tuple(Edge(e.src, lift(e.inc), e.input, e.dst) for e in A.edges)
    S = balanced_set(A.dim)
    empty = SemilinearSet.empty(2 * A.dim)
    accept_sets = {q: (S if q in A.terminals else empty) for q in A.states}
    return ChoAutomaton(2 * A.dim, A.alphabet, A.states, A.initial, edges, accept_sets)
