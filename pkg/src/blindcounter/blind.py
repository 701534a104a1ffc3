"""Blind counter automata, i.e. finite automata over Z^n x X*.

A word is accepted when some path from the initial state to a terminal
state reads it with total counter increment zero. Acceptance is decided
exactly: epsilon-only register sets R_pq are computed as semilinear sets
by state elimination, then pushed through the word letter by letter.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .config import DEFAULT, ResourceLimitError
from .semilinear import (LinearSet, SemilinearSet, Vec, constant_bound,
                         generator_bound, intersect_witness, norm, pair_constants,
                         simplify, vadd, vneg, zero)

State = Hashable
Word = tuple[str, ...]


class AutomatonError(ValueError):
    """Malformed automaton."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class SearchBudgetExceeded(ResourceLimitError):
    """A bounded search gave up; this says nothing about acceptance."""


@dataclass(frozen=True)
class Letter:
    symbol: str
    inverse: str


class Alphabet:
    """Letters with a fixed-point-free involution x <-> x'."""

    def __init__(self, letters: Iterable[Letter | tuple[str, str]]):
        inv: dict[str, str] = {}
        order: list[str] = []
        for item in letters:
            sym, partner = (item.symbol, item.inverse) if isinstance(item, Letter) else item
            if sym == partner:
                raise AutomatonError(f"letter {sym!r} is its own inverse")
            for a, b in ((sym, partner), (partner, sym)):
                if inv.get(a, b) != b:
                    raise AutomatonError(f"letter {a!r} has two inverses")
                if a not in inv:
                    inv[a] = b
                    order.append(a)
        self._inv = inv
        self.symbols: tuple[str, ...] = tuple(order)

    @classmethod
    def from_generators(cls, names: Iterable[str]) -> "Alphabet":
        """a, b, ... together with a', b', ..."""
        return cls((x, x + "'") for x in names)

    def inverse(self, x: str) -> str:
        return self._inv[x]

    def invert_word(self, w: Sequence[str]) -> Word:
        return tuple(self._inv[x] for x in reversed(w))

    def letters(self) -> list[Letter]:
        """One Letter per involution pair, in first-seen order."""
        seen, out = set(), []
        for x in self.symbols:
            if x not in seen:
                out.append(Letter(x, self._inv[x]))
                seen.update((x, self._inv[x]))
        return out

    def __contains__(self, x) -> bool:
        return x in self._inv

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self._inv == other._inv and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({self.letters()!r})"


def parse_word(text: str) -> Word:
    """Whitespace separated tokens; ``x'`` is the inverse of ``x``."""
    return tuple(text.split())


def format_word(w: Sequence[str]) -> str:
    return " ".join(w) if w else "ε"


@dataclass(frozen=True)
class Edge:
    src: State
    inc: Vec
    input: str | None
    dst: State

    def __post_init__(self):
        object.__setattr__(self, "inc", tuple(int(x) for x in self.inc))


@dataclass(frozen=True, eq=False)
class BlindAutomaton:
    dim: int
    alphabet: Alphabet
    states: tuple
    initial: State
    terminals: frozenset
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state names")
        known = set(self.states)
        if isinstance(self.initial, (list, set, frozenset)):
            raise AutomatonError("exactly one initial state is allowed")
        if self.initial not in known:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        if not self.terminals <= known:
            raise AutomatonError(f"terminals {set(self.terminals - known)} are not states")
        for e in self.edges:
            if e.src not in known or e.dst not in known:
                raise AutomatonError(f"edge {e} uses an unknown state")
            if len(e.inc) != self.dim:
                raise AutomatonError(f"edge {e} increment does not have dimension {self.dim}")
            if e.input is not None and e.input not in self.alphabet:
                raise AutomatonError(f"edge {e} reads unknown letter {e.input!r}")

    def __eq__(self, other):
        if not isinstance(other, BlindAutomaton):
            return NotImplemented
        return (self.dim, self.alphabet, self.states, self.initial, self.terminals,
                set(self.edges)) == (other.dim, other.alphabet, other.states, other.initial,
                                     other.terminals, set(other.edges))

    __hash__ = object.__hash__

    @property
    def epsilon_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.input is None]

    def letter_edges(self, x: str) -> list[Edge]:
        return [e for e in self.edges if e.input == x]

    def index(self, q: State) -> int:
        return self.states.index(q)


def normalize(dim: int, alphabet: Alphabet, states: Sequence, initial: State,
              terminals: Iterable, edges: Iterable[tuple]) -> BlindAutomaton:
    """Build an automaton whose edges read at most one letter.

    ``edges`` holds (src, inc, word, dst) with word a sequence of letters
    (empty or None for epsilon). A word of length m >= 2 becomes m edges
    through m - 1 fresh states named ``"<i>.<k>"`` by edge position; the
    increment rides on the first edge.
    """
    states = list(states)
    out: list[Edge] = []
    for i, (src, inc, word, dst) in enumerate(edges):
        inc = tuple(inc)
        if len(inc) != dim:
            raise AutomatonError(f"edge {i} increment has dimension {len(inc)}, expected {dim}")
        if isinstance(word, str):
            word = parse_word(word)
        word = tuple(word or ())
        if len(word) <= 1:
            out.append(Edge(src, inc, word[0] if word else None, dst))
            continue
        chain = [src] + [f"{i}.{k}" for k in range(1, len(word))] + [dst]
        for name in chain[1:-1]:
            if name in states:
                raise AutomatonError(f"fresh state name {name!r} already used")
            states.append(name)
        for k, x in enumerate(word):
            out.append(Edge(chain[k], inc if k == 0 else zero(dim), x, chain[k + 1]))
    return BlindAutomaton(dim, alphabet, tuple(states), initial, frozenset(terminals), tuple(out))


# ---------------------------------------------------------------------------
# epsilon reachability and the register-set dynamic program


def _shift(S: SemilinearSet, g: Vec) -> SemilinearSet:
    return SemilinearSet(S.dim, tuple(LinearSet(vadd(c.offset, g), c.periods) for c in S), S.cap)


class AutomatonCache:
    """Memo for one automaton: R_pq and register sets per word prefix.

    Single writer; pass the same object to repeated calls on one automaton.
    """

    def __init__(self, A: BlindAutomaton, cap: int | None = None):
        self.A = A
        self.cap = cap or DEFAULT.component_cap
        self._reach: dict | None = None
        self._reach_rev: dict | None = None
        self._forward: dict[Word, dict] = {}
        self._reverse: dict[Word, dict] = {}

    @property
    def reach(self) -> dict:
        if self._reach is None:
            self._reach = _eliminate(self.A, self.cap)
        return self._reach

    @property
    def reach_reversed(self) -> dict:
        if self._reach_rev is None:
            R = self.reach
            self._reach_rev = {(p, q): -R[q, p] for p in self.A.states for q in self.A.states}
        return self._reach_rev

    def empty(self) -> SemilinearSet:
        return SemilinearSet(self.A.dim, (), self.cap)

    def unit(self) -> SemilinearSet:
        return SemilinearSet(self.A.dim, (LinearSet(zero(self.A.dim)),), self.cap)


def _eliminate(A: BlindAutomaton, cap: int) -> dict:
    n = A.dim
    empty = SemilinearSet(n, (), cap)
    R = {(p, q): empty for p in A.states for q in A.states}
    for p in A.states:
        R[p, p] = SemilinearSet(n, (LinearSet(zero(n)),), cap)
    for e in A.epsilon_edges:
        R[e.src, e.dst] = R[e.src, e.dst] | SemilinearSet(n, (LinearSet(e.inc),), cap)
    for p in A.states:
        for q in A.states:
            R[p, q] = simplify(R[p, q])
    # eliminate states in ascending order; R_kk always contains 0
    for k in A.states:
        loop = simplify(R[k, k].star())
        old = dict(R)
        for p in A.states:
            if p == k:
                continue
            if not old[p, k].is_empty():
                R[p, k] = simplify(old[p, k] + loop)
            if not old[k, p].is_empty():
                R[k, p] = simplify(loop + old[k, p])
        R[k, k] = loop
        for p in A.states:
            if p == k or old[p, k].is_empty():
                continue
            for q in A.states:
                if q == k or old[k, q].is_empty():
                    continue
                R[p, q] = simplify(old[p, q] | (R[p, k] + old[k, q]))
    return R


def epsilon_reach(A: BlindAutomaton, cache: AutomatonCache | None = None) -> dict:
    """{(p, q): R_pq}, the register values of epsilon-only paths from p to q."""
    cache = cache or AutomatonCache(A)
    return dict(cache.reach)


def _close(A: BlindAutomaton, R: dict, sets: dict, cache: AutomatonCache) -> dict:
    out = {}
    for q in A.states:
        acc = cache.empty()
        for p, X in sets.items():
            if X.is_empty() or R[p, q].is_empty():
                continue
            acc = acc | (X + R[p, q])
        out[q] = simplify(acc)
    return out


def _step(A: BlindAutomaton, sets: dict, edges: Iterable[Edge], cache: AutomatonCache) -> dict:
    out = {q: cache.empty() for q in A.states}
    for e in edges:
        X = sets[e.src]
        if not X.is_empty():
            out[e.dst] = out[e.dst] | _shift(X, e.inc)
    return out


def _run_dp(A, R, start, letter_edges, word, memo, cache):
    # memo maps word prefixes to closed register sets
    k = len(word)
    while k > 0 and word[:k] not in memo:
        k -= 1
    if k == 0 and () not in memo:
        memo[()] = _close(A, R, start, cache)
    current = memo[word[:k]]
    for i in range(k, len(word)):
        current = _close(A, R, _step(A, current, letter_edges(word[i]), cache), cache)
        memo[word[:i + 1]] = current
    return current


def _check_word(A: BlindAutomaton, w: Sequence[str]) -> Word:
    w = tuple(w)
    for x in w:
        if x not in A.alphabet:
            raise PreconditionError(f"letter {x!r} is not in the alphabet")
    return w


def reachable_register_set(A: BlindAutomaton, w: Sequence[str],
                           cache: AutomatonCache | None = None) -> dict:
    """{q: all g such that (g, w) labels a path from the initial state to q}."""
    w = _check_word(A, w)
    cache = cache or AutomatonCache(A)
    start = {A.initial: cache.unit()}
    return _run_dp(A, cache.reach, start, A.letter_edges, w, cache._forward, cache)


def reverse_register_set(A: BlindAutomaton, w: Sequence[str],
                         cache: AutomatonCache | None = None) -> dict:
    """{q: all -t such that (t, w^-1) labels a path from q to some terminal}.

    Runs the forward program on the reversed automaton: edges flipped,
    increments negated, letters inverted, every terminal a start state,
    and R'_pq = -R_qp.
    """
    w = _check_word(A, w)
    cache = cache or AutomatonCache(A)
    inv = A.alphabet.inverse

    def letter_edges(x):
        return [Edge(e.dst, vneg(e.inc), x, e.src) for e in A.edges
                if e.input is not None and inv(e.input) == x]

    start = {t: cache.unit() for t in A.states if t in A.terminals}
    if not start:
        return {q: cache.empty() for q in A.states}
    return _run_dp(A, cache.reach_reversed, start, letter_edges, w, cache._reverse, cache)


def accept(A: BlindAutomaton, w: Sequence[str], cache: AutomatonCache | None = None) -> bool:
    """Exact acceptance for nondeterministic blind counter automata."""
    sets = reachable_register_set(A, w, cache)
    origin = zero(A.dim)
    return any(origin in sets[t] for t in A.states if t in A.terminals)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Run:
    edges: tuple[Edge, ...]
    trace: tuple[Vec, ...]

    @property
    def total(self) -> Vec:
        return self.trace[-1]

    def word(self) -> Word:
        return tuple(e.input for e in self.edges if e.input is not None)

    def replay_ok(self, A: BlindAutomaton, w: Sequence[str], start: State | None = None,
                  end: Iterable | None = None) -> bool:
        """Consecutive edges, trace partial sums, spelled word all consistent."""
        here = A.initial if start is None else start
        pos = zero(A.dim)
        if self.trace[0] != pos:
            return False
        for e, t in zip(self.edges, self.trace[1:]):
            if e.src != here or e not in A.edges:
                return False
            pos = vadd(pos, e.inc)
            if pos != t:
                return False
            here = e.dst
        ends = A.terminals if end is None else set(end)
        return self.word() == tuple(w) and here in ends and len(self.trace) == len(self.edges) + 1


def find_path(A: BlindAutomaton, w: Sequence[str], start: State, ends: Iterable,
              target: Vec, radius: int, budget: int) -> Run | None:
    """Shortest path start -> ends reading w with total ``target``, counters kept within ``radius``.

    Breadth-first over configurations (position, state, counter). Raises
    SearchBudgetExceeded after ``budget`` configurations.
    """
    w = tuple(w)
    ends = set(ends)
    origin = zero(A.dim)
    first = (0, start, origin)
    parent: dict = {first: None}
    queue = deque([first])
    out_edges: dict = {}
    for e in A.edges:
        out_edges.setdefault(e.src, []).append(e)
    while queue:
        conf = queue.popleft()
        i, q, c = conf
        if i == len(w) and q in ends and c == target:
            edges, trace = [], [c]
            while parent[conf] is not None:
                conf, e = parent[conf]
                edges.append(e)
                trace.append(conf[2])
            return Run(tuple(reversed(edges)), tuple(reversed(trace)))
        for e in out_edges.get(q, ()):
            if e.input is None:
                j = i
            elif i < len(w) and e.input == w[i]:
                j = i + 1
            else:
                continue
            c2 = vadd(c, e.inc)
            if norm(c2) > radius:
                continue
            nxt = (j, e.dst, c2)
            if nxt not in parent:
                parent[nxt] = (conf, e)
                if len(parent) > budget:
                    raise SearchBudgetExceeded(f"path search exceeded {budget} configurations")
                queue.append(nxt)
    return None


def accept_with_certificate(A: BlindAutomaton, w: Sequence[str],
                            cache: AutomatonCache | None = None,
                            budget: int | None = None) -> Run | None:
    """A run reading w with total increment zero, or None if w is rejected.

    The decision comes from ``accept``; the run is then found by path
    search with a counter radius that doubles until the budget runs out.
    """
    w = _check_word(A, w)
    if not accept(A, w, cache):
        return None
    budget = budget or DEFAULT.search_budget
    edge_max = max((norm(e.inc) for e in A.edges), default=0)
    radius = max(1, edge_max * (len(w) + len(A.states)))
    while True:
        run = find_path(A, w, A.initial, A.terminals, zero(A.dim), radius, budget)
        if run is not None:
            return run
        radius *= 2
        if radius > budget:
            raise SearchBudgetExceeded("no certificate found within the search budget")


# ---------------------------------------------------------------------------
# growth-argument constants and short witnesses


@dataclass(frozen=True)
class AutomatonConstants:
    F: int
    K: int
    R: int
    C: Fraction
    D: Fraction

    @property
    def P(self) -> Fraction:
        return 2 * self.C * self.F

    @property
    def Q(self) -> Fraction:
        return self.C * self.F + self.D

    def bound(self, length: int) -> Fraction:
        return self.P * length + self.Q


def automaton_constants(A: BlindAutomaton, cache: AutomatonCache | None = None,
                        period_cap: int | None = None) -> AutomatonConstants:
    """F, K, R and the intersection constants (C, D) for the automaton.

    (C, D) range over every pair of period subsets that register sets of
    this automaton can carry: subsets of the periods occurring in the R_pq
    on one side, of their negations on the other.
    """
    cache = cache or AutomatonCache(A)
    R = cache.reach
    F = max([constant_bound(S) for S in R.values()] + [norm(e.inc) for e in A.edges] + [0])
    K = max([generator_bound(S) for S in R.values()] + [0])
    periods = sorted({p for S in R.values() for c in S for p in c.periods})
    cap = period_cap or DEFAULT.constants_period_cap
    if len(periods) > cap:
        raise ResourceLimitError(f"{len(periods)} distinct periods, cap is {cap}")
    negs = sorted(vneg(p) for p in periods)
    subsets = [c for k in range(len(periods) + 1) for c in combinations(periods, k)]
    nsubsets = [c for k in range(len(negs) + 1) for c in combinations(negs, k)]
    Pmax, Qmax = Fraction(1), Fraction(0)
    for s in subsets:
        for t in nsubsets:
            P, Q = pair_constants(tuple(sorted(s)), tuple(sorted(t)), A.dim)
            Pmax, Qmax = max(Pmax, P), max(Qmax, Q)
    return AutomatonConstants(F, K, len(A.states), 2 * Pmax, Qmax + 1)


def short_witness(A: BlindAutomaton, w: Sequence[str],
                  cache: AutomatonCache | None = None) -> tuple[State, Vec]:
    """(q, g): (g, w) labels initial -> q and (-g, w^-1) labels q -> terminal.

    g has least norm among all such choices (ties broken by state order).
    Raises PreconditionError unless the automaton accepts w w^-1.
    """
    w = _check_word(A, w)
    cache = cache or AutomatonCache(A)
    if not accept(A, w + A.alphabet.invert_word(w), cache):
        raise PreconditionError(f"w w^-1 is not accepted for w = {format_word(w)}")
    fwd = reachable_register_set(A, w, cache)
    back = reverse_register_set(A, w, cache)
    best = None
    for q in A.states:
        if fwd[q].is_empty() or back[q].is_empty():
            continue
        g = intersect_witness(fwd[q], back[q])
        if g is not None and (best is None or norm(g) < norm(best[1])):
            best = (q, g)
    if best is None:
        raise AssertionError("accepted w w^-1 but found no meeting state")
    return best
