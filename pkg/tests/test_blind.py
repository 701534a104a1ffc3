from itertools import product

import pytest

from blindcounter import oracles
from blindcounter.blind import (Alphabet, AutomatonCache, AutomatonError, BlindAutomaton, Edge,
                                PreconditionError, SearchBudgetExceeded, accept,
                                accept_with_certificate, automaton_constants, epsilon_reach,
                                normalize, parse_word, reachable_register_set,
                                reverse_register_set, short_witness)
from blindcounter.semilinear import SemilinearSet, member, norm

A1 = Alphabet.from_generators("a")
AB = Alphabet.from_generators("ab")


def test_alphabet_rejects_bad_involution():
    with pytest.raises(AutomatonError):
        Alphabet([("a", "a")])
    with pytest.raises(AutomatonError):
        Alphabet([("a", "b"), ("a", "c")])


def test_parse_word():
    assert parse_word("a  b' a") == ("a", "b'", "a")
    assert parse_word("") == ()


def test_validation():
    with pytest.raises(AutomatonError):
        BlindAutomaton(1, A1, ("s",), {"s"}, set(), ())
    with pytest.raises(AutomatonError):
        BlindAutomaton(1, A1, ("s",), "s", set(), (Edge("s", (1, 0), "a", "s"),))
    with pytest.raises(AutomatonError):
        BlindAutomaton(1, A1, ("s",), "s", set(), (Edge("s", (1,), "b", "s"),))


def test_wp_z_examples(wp_z):
    assert accept(wp_z, parse_word("a a'"))
    assert not accept(wp_z, parse_word("a a"))
    assert accept(wp_z, parse_word("a' a a a' a' a"))
    assert accept(wp_z, ())


def test_certificate(wp_z):
    run = accept_with_certificate(wp_z, parse_word("a a'"))
    assert len(run.edges) == 2
    assert run.trace == ((0,), (1,), (0,))
    assert accept_with_certificate(wp_z, parse_word("a a")) is None


def test_certificate_budget(wp_z):
    with pytest.raises(SearchBudgetExceeded):
        accept_with_certificate(wp_z, ("a",) * 30 + ("a'",) * 30, budget=5)


def test_normalize_splits_words():
    A = normalize(2, AB, ("p", "q"), "p", {"q"}, [("p", (1, 0), "a b", "q")])
    assert A.states == ("p", "q", "0.1")
    assert set(A.edges) == {Edge("p", (1, 0), "a", "0.1"), Edge("0.1", (0, 0), "b", "q")}
    B = normalize(1, A1, ("s",), "s", {"s"}, [("s", (1,), "a", "s"), ("s", (-1,), "a'", "s")])
    assert len(B.edges) == 2 and B.states == ("s",)


def test_normalize_preserves_language(rng):
    for _ in range(30):
        ns = rng.randint(1, 3)
        raw = [(rng.randrange(ns), (rng.randint(-1, 1),),
                tuple(rng.choice(["a", "a'"]) for _ in range(rng.randint(0, 3))), rng.randrange(ns))
               for _ in range(rng.randint(1, 4))]
        A = normalize(1, A1, tuple(range(ns)), 0, {ns - 1}, raw)
        for w in oracles.words(["a", "a'"], 5):
            assert accept(A, w) == oracles.bfs_accept(A, w)


def test_epsilon_reach_examples():
    plain = BlindAutomaton(1, A1, ("p", "q"), "p", {"q"}, (Edge("p", (1,), "a", "q"),))
    R = epsilon_reach(plain)
    assert R["p", "p"] == SemilinearSet.singleton((0,))
    assert R["p", "q"].is_empty()
    loop = BlindAutomaton(2, A1, ("p",), "p", {"p"}, (Edge("p", (1, -1), None, "p"),))
    Rp = epsilon_reach(loop)["p", "p"]
    for k in range(7):
        assert member(Rp, (k, -k))
    assert not member(Rp, (-1, 1))
    two = BlindAutomaton(1, A1, ("p", "q"), "p", {"q"},
                         (Edge("p", (1,), None, "q"), Edge("q", (-1,), None, "p")))
    Rpq = epsilon_reach(two)["p", "q"]
    assert member(Rpq, (1,)) and not member(Rpq, (0,)) and not member(Rpq, (2,))


def _eps_paths(A, maxlen):
    out = set()
    frontier = {(q, q, (0,) * A.dim) for q in A.states}
    out |= frontier
    for _ in range(maxlen):
        frontier = {(p, e.dst, tuple(x + y for x, y in zip(g, e.inc)))
                    for p, q, g in frontier for e in A.epsilon_edges if e.src == q}
        out |= frontier
    return out


def test_epsilon_reach_contains_all_short_paths(rng):
    for _ in range(40):
        A = oracles.random_blind(rng, max_states=4)
        R = epsilon_reach(A)
        for p, q, g in _eps_paths(A, 6):
            assert member(R[p, q], g)
        for p in A.states:
            assert member(R[p, p], (0,) * A.dim)


def test_register_sets(wp_z):
    assert reachable_register_set(wp_z, parse_word("a a'"))["s"] == SemilinearSet.singleton((0,))
    cache = AutomatonCache(wp_z)
    assert reachable_register_set(wp_z, (), cache)["s"] == cache.reach["s", "s"]


def test_register_sets_realized(rng):
    """Every value in the forward set is reached by some run (box search)."""
    for _ in range(30):
        A = oracles.random_blind(rng)
        cache = AutomatonCache(A)
        for w in oracles.words(["a", "a'"], 2):
            X = reachable_register_set(A, w, cache)
            for q in A.states:
                for g in product(range(-2, 3), repeat=A.dim):
                    if member(X[q], g):
                        shifted = BlindAutomaton(A.dim, A.alphabet, A.states + ("end",), A.initial,
                                                 {"end"}, A.edges + (Edge(q, tuple(-x for x in g), None, "end"),))
                        assert oracles.bfs_accept(shifted, w)


def test_reverse_register_set(rng):
    """g is in the reverse set at q iff (-g, w^-1) runs from q to a terminal."""
    for _ in range(20):
        A = oracles.random_blind(rng)
        cache = AutomatonCache(A)
        for w in oracles.words(["a", "a'"], 2):
            Y = reverse_register_set(A, w, cache)
            winv = A.alphabet.invert_word(w)
            for q in A.states:
                for g in product(range(-2, 3), repeat=A.dim):
                    start = BlindAutomaton(A.dim, A.alphabet, A.states + ("start",), "start",
                                           A.terminals, A.edges + (Edge("start", g, None, q),))
                    assert member(Y[q], g) == oracles.bfs_accept(start, winv)


def test_acceptance_vs_search(rng):
    for _ in range(60):
        A = oracles.random_blind(rng)
        cache = AutomatonCache(A)
        for w in oracles.words(["a", "a'"], 4):
            assert accept(A, w, cache) == oracles.bfs_accept(A, w)


def test_certificates_replay(rng):
    checked = 0
    while checked < 100:
        A = oracles.random_blind(rng)
        cache = AutomatonCache(A)
        for w in oracles.words(["a", "a'"], 3):
            if accept(A, w, cache):
                run = accept_with_certificate(A, w, cache)
                assert run.replay_ok(A, w) and not any(run.total)
                assert run.word() == w
                checked += 1


def test_constants_simple(wp_z):
    c = automaton_constants(wp_z)
    assert (c.F, c.K, c.R) == (1, 0, 1)
    assert c.P == 2 * c.C * c.F and c.Q == c.C * c.F + c.D
    two = BlindAutomaton(2, AB, (0, 1, 2), 0, {2}, (Edge(0, (1, 0), "a", 1), Edge(1, (0, -1), "b", 2)))
    c2 = automaton_constants(two)
    assert (c2.F, c2.K, c2.R) == (1, 0, 3)


def test_short_witness_examples(wp_z):
    assert short_witness(wp_z, ()) == ("s", (0,))
    q, g = short_witness(wp_z, ("a",))
    assert (q, g) == ("s", (1,))
    c = automaton_constants(wp_z)
    assert norm(g) < c.bound(1)


def test_short_witness_precondition():
    A = BlindAutomaton(1, A1, ("s",), "s", {"s"}, (Edge("s", (1,), "a", "s"),))
    with pytest.raises(PreconditionError):
        short_witness(A, ("a",))


def test_short_witness_halves(rng):
    anan = BlindAutomaton(1, A1, ("p", "q"), "p", {"q", "p"},
                          (Edge("p", (1,), "a", "p"), Edge("p", (0,), None, "q"),
                           Edge("q", (-1,), "a'", "q")))
    cache = AutomatonCache(anan)
    for _ in range(50):
        w = tuple(rng.choice(["a"]) for _ in range(rng.randint(0, 6)))
        q, g = short_witness(anan, w, cache)
        first = BlindAutomaton(1, A1, anan.states + ("end",), "p", {"end"},
                               anan.edges + (Edge(q, (-g[0],), None, "end"),))
        assert accept_with_certificate(first, w) is not None
        second = BlindAutomaton(1, A1, anan.states + ("start",), "start", anan.terminals,
                                anan.edges + (Edge("start", g, None, q),))
        assert accept_with_certificate(second, A1.invert_word(w)) is not None
