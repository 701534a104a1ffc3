"""Desk-scale experiments: ball growth, the short-witness map, block swaps.

Every report has ``to_dict`` (plain data, fed to the canonical JSON
writer) and ``to_text`` (an aligned table), and an ``ok`` flag that is
False when an asserted invariant failed. Reports are still produced in
that case so the violation can be inspected.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .blind import AutomatonCache, BlindAutomaton, accept, automaton_constants, format_word, short_witness
from .cho import is_deterministic_blind
from .config import DEFAULT, Config, ResourceLimitError
from .groups import (HEISENBERG_LETTERS, GenMap, build_t1, exchange_index, heisenberg_evaluate,
                     heisenberg_wp, interchange_search, invert_word, swap_blocks, t1_factorization,
                     wp_member)
from .semilinear import norm


def _table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(x)


# ---------------------------------------------------------------------------
# balls and growth


def generator_list(g) -> list[tuple[str, object]]:
    """(letter, element) in alphabet order, for a GenMap or a Heisenberg alphabet."""
    if isinstance(g, GenMap):
        return [(x, g.images[x]) for x in g.alphabet]
    return [(x, HEISENBERG_LETTERS[x]) for x in g]


@dataclass
class Ball:
    """Elements in BFS order with the first word that reached each."""

    radius: int
    elements: list
    words: list
    lengths: list

    def sizes(self) -> list[int]:
        counts = [0] * (self.radius + 1)
        for r in self.lengths:
            counts[r] += 1
        return list(np.cumsum(counts, dtype=np.int64).tolist())


def ball(group, gens, N: int, cap: int | None = None) -> Ball:
    """Breadth-first closure of the identity under right multiplication by generators.

    Letters are tried in the order given, so the recorded word for each
    element is the least one of minimal length in BFS discovery order.
    """
    if N < 0:
        raise ValueError("radius must be nonnegative")
    cap = cap or DEFAULT.ball_cap
    e = group.identity()
    seen = {group.key(e)}
    elements, words, lengths = [e], [()], [0]
    frontier = [0]
    for r in range(1, N + 1):
        nxt = []
        for i in frontier:
            for x, gx in gens:
                y = group.multiply(elements[i], gx)
                k = group.key(y)
                if k in seen:
                    continue
                seen.add(k)
                if len(seen) > cap:
                    raise ResourceLimitError(f"ball exceeds {cap} elements at radius {r}")
                elements.append(y)
                words.append(words[i] + (x,))
                lengths.append(r)
                nxt.append(len(elements) - 1)
        frontier = nxt
    return Ball(N, elements, words, lengths)


@dataclass
class GrowthTable:
    sizes: list[int]

    @property
    def radii(self) -> list[int]:
        return list(range(len(self.sizes)))

    def degree(self) -> Fraction:
        return growth_degree_estimate(self)

    def to_dict(self) -> dict:
        out = {"radii": self.radii, "sizes": self.sizes}
        if len(self.sizes) >= 4:
            out["degree_estimate"] = f"{float(self.degree()):.6f}"
        return out

    def to_text(self) -> str:
        text = _table(["radius", "size"], list(zip(self.radii, self.sizes)))
        if len(self.sizes) >= 4:
            text += f"\ndegree estimate: {float(self.degree()):.6f}"
        return text


def ball_sizes(group, g, N: int, cap: int | None = None) -> GrowthTable:
    return GrowthTable(ball(group, generator_list(g), N, cap).sizes())


def growth_degree_estimate(t: GrowthTable) -> Fraction:
    """Least-squares slope of log size against log radius over the top half.

    A heuristic, not a certificate; rounded to six decimals and returned
    as an exact rational so reports stay byte-stable.
    """
    if len(t.sizes) < 4:
        raise ValueError("need at least 4 radii")
    N = len(t.sizes) - 1
    radii = [r for r in range(1, N + 1) if 2 * r >= N]
    if len(radii) < 2 or min(t.sizes) < 1:
        raise ValueError("degenerate growth table")
    x = np.log(np.array(radii, dtype=float))
    y = np.log(np.array([t.sizes[r] for r in radii], dtype=float))
    slope = np.polyfit(x, y, 1)[0]
    return Fraction(round(float(slope) * 10 ** 6), 10 ** 6)


# ---------------------------------------------------------------------------
# word-problem sweeps


def deterministic_tables(A: BlindAutomaton):
    """(trans, inc, init, terminal) arrays for a deterministic automaton, letters in alphabet order."""
    if not is_deterministic_blind(A):
        raise ValueError("automaton is not deterministic")
    letters = list(A.alphabet)
    S, k = len(A.states), len(letters)
    trans = np.full((S, k), -1, dtype=np.int64)
    inc = np.zeros((S, k, A.dim), dtype=np.int64)
    for e in A.edges:
        s, a = A.index(e.src), letters.index(e.input)
        trans[s, a] = A.index(e.dst)
        inc[s, a] = e.inc
    terminal = np.array([q in A.terminals for q in A.states], dtype=bool)
    return trans, inc, A.index(A.initial), terminal


def batch_accept(A: BlindAutomaton, maxlen: int):
    """Accept flags for every word up to ``maxlen`` in shortlex order.

    Deterministic automata go through the compiled kernel; others through
    the exact dynamic program word by word.
    """
    letters = list(A.alphabet)
    codes, lengths = kernels.all_words(len(letters), maxlen)
    if is_deterministic_blind(A):
        flags = kernels.run_deterministic(*deterministic_tables(A), codes, lengths)
    else:
        cache = AutomatonCache(A)
        flags = np.array([accept(A, _decode(c, n, letters), cache) for c, n in zip(codes, lengths)],
                         dtype=bool)
    return codes, lengths, flags


def _decode(codes, length, letters) -> tuple[str, ...]:
    return tuple(letters[int(c)] for c in codes[:length])


@dataclass
class SweepReport:
    words: int
    disagreements: list

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {"words": self.words, "disagreements": [format_word(w) for w in self.disagreements],
                "ok": self.ok}

    def to_text(self) -> str:
        lines = [f"words checked: {self.words}", f"disagreements: {len(self.disagreements)}"]
        lines += [f"  {format_word(w)}" for w in self.disagreements[:20]]
        return "\n".join(lines)


def wp_sweep(A: BlindAutomaton, g: GenMap, maxlen: int, limit: int = 100) -> SweepReport:
    """Compare the automaton with direct group evaluation on all words up to ``maxlen``."""
    if list(A.alphabet) != list(g.alphabet):
        raise ValueError("automaton and generator map use different alphabets")
    codes, lengths, flags = batch_accept(A, maxlen)
    letters = list(A.alphabet)
    bad = []
    for c, n, f in zip(codes, lengths, flags):
        w = _decode(c, n, letters)
        if bool(f) != wp_member(g, w):
            bad.append(w)
            if len(bad) >= limit:
                break
    return SweepReport(len(codes), bad)


# ---------------------------------------------------------------------------
# the short-witness map


@dataclass
class WitnessRow:
    word: tuple
    length: int
    state: object
    witness: tuple
    norm: int
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.norm < self.bound


@dataclass
class WitnessReport:
    constants: dict
    rows: list[WitnessRow]
    multiplicity: dict
    sanity_words: int
    sanity_failures: list = field(default_factory=list)

    @property
    def R(self) -> int:
        return self.constants["R"]

    @property
    def bound_violations(self) -> list[WitnessRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def multiplicity_violations(self) -> dict:
        return {g: m for g, m in self.multiplicity.items() if m > self.R}

    @property
    def ok(self) -> bool:
        return not (self.sanity_failures or self.bound_violations or self.multiplicity_violations)

    def histogram(self) -> dict[int, int]:
        hist: dict[int, int] = defaultdict(int)
        for m in self.multiplicity.values():
            hist[m] += 1
        return dict(sorted(hist.items()))

    def to_dict(self) -> dict:
        return {
            "constants": {k: str(v) for k, v in self.constants.items()},
            "elements": [{"word": format_word(r.word), "length": r.length, "state": str(r.state),
                          "witness": list(r.witness), "norm": r.norm, "bound": str(r.bound),
                          "ok": r.ok} for r in self.rows],
            "multiplicity_histogram": {str(k): v for k, v in self.histogram().items()},
            "max_multiplicity": max(self.multiplicity.values(), default=0),
            "sanity_words": self.sanity_words,
            "sanity_failures": [format_word(w) for w in self.sanity_failures],
            "ok": self.ok,
        }

    def to_text(self) -> str:
        c = self.constants
        head = "  ".join(f"{k}={_fmt(Fraction(v))}" for k, v in c.items())
        rows = [(format_word(r.word), r.length, r.state, r.witness, r.norm, _fmt(r.bound),
                 "ok" if r.ok else "VIOLATION") for r in self.rows]
        text = [head, _table(["word", "|h|", "q", "h sigma", "norm", "P|h|+Q", ""], rows)]
        hist = ", ".join(f"{m}: {n}" for m, n in self.histogram().items())
        text.append(f"preimage multiplicities (multiplicity: count): {hist}  (R = {self.R})")
        if self.sanity_failures:
            text.append(f"sanity check failed on {len(self.sanity_failures)} words")
        text.append("all bounds hold" if self.ok else "VIOLATIONS FOUND")
        return "\n".join(text)


def witness_map_experiment(A: BlindAutomaton, group, g: GenMap, N: int,
                           sanity_len: int = 4, config: Config | None = None) -> WitnessReport:
    """Run the short-witness map over the ball of radius N.

    First checks that A decides the word problem on all words up to
    ``sanity_len``. Then, for every element h, takes its BFS word w, asks
    the automaton for the least-norm (q, g) with (g, w) reaching q and
    (-g, w^-1) leading back to a terminal, and checks |g| < P|h| + Q.
    The number of elements sharing a value g must not exceed R.
    """
    config = config or DEFAULT
    cache = AutomatonCache(A, config.component_cap)
    codes, lengths, flags = batch_accept(A, sanity_len)
    letters = list(A.alphabet)
    failures = []
    for c, n, f in zip(codes, lengths, flags):
        w = _decode(c, n, letters)
        if bool(f) != wp_member(g, w):
            failures.append(w)
    consts = automaton_constants(A, cache, config.constants_period_cap)
    cdict = {"F": consts.F, "K": consts.K, "R": consts.R, "C": consts.C, "D": consts.D,
             "P": consts.P, "Q": consts.Q}
    if failures:
        return WitnessReport(cdict, [], {}, len(codes), failures)
    B = ball(group, generator_list(g), N, config.ball_cap)

    def work(i):
        w = B.words[i]
        q, wit = short_witness(A, w, cache)
        return WitnessRow(w, len(w), q, wit, norm(wit), consts.bound(len(w)))

    idx = range(len(B.elements))
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            rows = list(pool.map(work, idx))
    else:
        rows = [work(i) for i in idx]
    mult: dict = defaultdict(set)
    for r, h in zip(rows, B.elements):
        mult[r.witness].add(group.key(h))
    return WitnessReport(cdict, rows, {k: len(v) for k, v in sorted(mult.items())}, len(codes))


# ---------------------------------------------------------------------------
# Heisenberg block swaps


@dataclass
class InterchangeReport:
    n: int
    rows: list[dict]
    accepted_swap: tuple | None

    @property
    def ok(self) -> bool:
        return self.accepted_swap is None and all(
            r["differs"] and r["delta"] == r["expected"] and r["counts_kept"] for r in self.rows)

    def to_dict(self) -> dict:
        return {"n": self.n, "pairs": self.rows,
                "accepted_swap": list(self.accepted_swap) if self.accepted_swap else None,
                "ok": self.ok}

    def to_text(self) -> str:
        rows = [(r["r"], r["s"], r["delta"], r["expected"], "yes" if r["differs"] else "NO",
                 "yes" if r["counts_kept"] else "NO") for r in self.rows]
        text = [f"t1({self.n}) = {''.join(build_t1(self.n))}",
                _table(["r", "s", "delta", "(s-r)^2", "differs", "counts"], rows)]
        if self.accepted_swap:
            text.append(f"swap {self.accepted_swap} keeps t1 t1^-1 in the word problem")
        else:
            text.append("no block swap of t1 t1^-1 stays in the word problem")
        text.append("all checks pass" if self.ok else "CHECKS FAILED")
        return "\n".join(text)


def heisenberg_interchange_experiment(n: int) -> InterchangeReport:
    if n < 2:
        raise ValueError("n must be at least 2")
    t1 = build_t1(n)
    parts = t1_factorization(n)
    h0, e0 = heisenberg_evaluate(t1), exchange_index(t1)
    rows = []
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            u = swap_blocks(parts, r, s)
            rows.append({"r": r, "s": s, "delta": exchange_index(u) - e0, "expected": (s - r) ** 2,
                         "differs": heisenberg_evaluate(u) != h0,
                         "counts_kept": sorted(u) == sorted(t1)})
    tail = invert_word(t1)
    hit = interchange_search(heisenberg_wp, t1 + tail, t1_factorization(n, tail))
    return InterchangeReport(n, rows, hit)


@dataclass
class ExchangeReport:
    maxlen: int
    words: int
    classes: int
    counterexamples: list

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {"maxlen": self.maxlen, "words": self.words, "classes": self.classes,
                "counterexamples": self.counterexamples, "ok": self.ok}

    def to_text(self) -> str:
        return (f"words over x, y up to length {self.maxlen}: {self.words}\n"
                f"(letter counts, element) classes: {self.classes}\n"
                f"counterexamples: {len(self.counterexamples)}")


def exchange_equivalence(maxlen: int) -> ExchangeReport:
    """For words over {x, y} with equal letter counts, equal Heisenberg
    element exactly when equal exchange index. Checked on all words."""
    codes, lengths = kernels.all_words(2, maxlen)
    elems = kernels.heisenberg_batch(codes, lengths)
    idx = kernels.exchange_index_batch(codes, lengths)
    by_elem: dict = {}
    by_index: dict = {}
    bad = []
    for e, k, n in zip(map(tuple, elems.tolist()), idx.tolist(), lengths.tolist()):
        # letter counts are the (a, b) coordinates, so e determines them
        counts = (e[0], e[1])
        if by_elem.setdefault(e, k) != k:
            bad.append({"element": list(e), "indices": [by_elem[e], k]})
        if by_index.setdefault((counts, k), e) != e:
            bad.append({"counts": list(counts), "index": k})
    return ExchangeReport(maxlen, len(codes), len(by_elem), bad)


__all__ = [
    "Ball", "ExchangeReport", "GrowthTable", "InterchangeReport", "SweepReport", "WitnessReport",
    "ball", "ball_sizes", "batch_accept", "deterministic_tables",
    "exchange_equivalence", "generator_list", "growth_degree_estimate",
    "heisenberg_interchange_experiment", "witness_map_experiment", "wp_sweep",
]
