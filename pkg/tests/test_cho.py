import pytest

from blindcounter import oracles
from blindcounter.blind import (Alphabet, AutomatonCache, AutomatonError, BlindAutomaton, Edge,
                                PreconditionError, accept)
from blindcounter.cho import (ChoAutomaton, balanced_set, blind_det_to_cho, cho_accept,
                              cho_to_blind, is_deterministic_blind, is_deterministic_cho, lift)
from blindcounter.config import ResourceLimitError
from blindcounter.semilinear import SemilinearSet

A1 = Alphabet.from_generators("a")
AB = Alphabet.from_generators("ab")


@pytest.fixture
def even_a():
    return ChoAutomaton(1, A1, ("s",), "s", (Edge("s", (1,), "a", "s"),),
                        {"s": SemilinearSet.linear((2,), [(2,)])})


def test_validation():
    with pytest.raises(AutomatonError):
        ChoAutomaton(1, A1, ("s",), "s", (Edge("s", (1,), None, "s"),), {})
    with pytest.raises(AutomatonError):
        ChoAutomaton(1, A1, ("s",), "s", (Edge("s", (-1,), "a", "s"),), {})
    with pytest.raises(AutomatonError):
        ChoAutomaton(1, A1, ("s",), "s", (), {"s": SemilinearSet.singleton((-1,))})


def test_missing_accept_sets_are_empty():
    B = ChoAutomaton(1, A1, ("s", "t"), "s", (), {})
    assert B.accept_sets["t"].is_empty()


def test_cho_accept_examples(even_a):
    assert cho_accept(even_a, ("a", "a"))
    assert not cho_accept(even_a, ("a",))
    assert not cho_accept(even_a, ())
    zero_ok = ChoAutomaton(1, A1, ("s",), "s", (), {"s": SemilinearSet.singleton((0,))})
    assert cho_accept(zero_ok, ())


def test_cho_accept_vs_paths(rng):
    for _ in range(60):
        B = oracles.random_cho(rng)
        for w in oracles.words(["a", "a'"], 5):
            assert cho_accept(B, w) == oracles.cho_paths_accept(B, w)


def test_vector_cap():
    B = ChoAutomaton(2, A1, ("s",), "s",
                     (Edge("s", (1, 0), "a", "s"), Edge("s", (0, 1), "a", "s")), {})
    with pytest.raises(ResourceLimitError):
        cho_accept(B, ("a",) * 10, cap=5)


def test_determinism_checks():
    assert is_deterministic_cho(ChoAutomaton(1, A1, ("s",), "s", (), {}))
    two = ChoAutomaton(1, A1, ("s",), "s", (Edge("s", (1,), "a", "s"), Edge("s", (0,), "a", "s")), {})
    assert not is_deterministic_cho(two)
    ok = ChoAutomaton(1, AB, ("s",), "s", (Edge("s", (1,), "a", "s"), Edge("s", (0,), "b", "s")), {})
    assert is_deterministic_cho(ok)
    eps = BlindAutomaton(1, A1, ("s",), "s", {"s"}, (Edge("s", (0,), None, "s"),))
    assert not is_deterministic_blind(eps)


def test_cho_to_blind_example(even_a):
    A = cho_to_blind(even_a)
    assert A.states == ("s", "s#0") and A.terminals == {"s#0"}
    for w in oracles.words(["a", "a'"], 8):
        expect = len(w) >= 2 and len(w) % 2 == 0 and set(w) == {"a"}
        assert accept(A, w) == expect


def test_cho_to_blind_empty_sets():
    B = ChoAutomaton(1, A1, ("s",), "s", (Edge("s", (1,), "a", "s"),), {})
    A = cho_to_blind(B)
    assert not A.terminals
    assert not any(accept(A, w) for w in oracles.words(["a"], 4))


def test_cho_to_blind_size(rng):
    for _ in range(30):
        B = oracles.random_cho(rng)
        A = cho_to_blind(B)
        comps = sum(len(S) for S in B.accept_sets.values())
        periods = sum(len(c.periods) for S in B.accept_sets.values() for c in S)
        assert len(A.states) == len(B.states) + comps
        assert len(A.edges) == len(B.edges) + comps + periods


def test_lift_and_balanced():
    assert lift((2, -3, 0)) == (2, 0, 0, 3, 0, 0)
    S = balanced_set(2)
    assert (1, 1, 0, 0) in S and (0, 0, 2, 2) in S and (1, 0, 0, 0) not in S


def test_blind_to_cho_examples(wp_z):
    C = blind_det_to_cho(wp_z)
    assert C.k == 2 and is_deterministic_cho(C)
    assert cho_accept(C, ("a", "a'"))
    assert not cho_accept(C, ("a", "a"))


def test_blind_to_cho_rejects_nondeterministic():
    two = BlindAutomaton(1, A1, ("s",), "s", {"s"}, (Edge("s", (1,), "a", "s"), Edge("s", (0,), "a", "s")))
    with pytest.raises(PreconditionError):
        blind_det_to_cho(two)


def test_conversions_preserve_language(rng):
    for _ in range(40):
        B = oracles.random_cho(rng)
        A = cho_to_blind(B)
        cache = AutomatonCache(A)
        for w in oracles.words(["a", "a'"], 5):
            assert cho_accept(B, w) == accept(A, w, cache)
    for _ in range(15):
        A = oracles.random_det_blind(rng)
        C = blind_det_to_cho(A)
        assert is_deterministic_cho(C)
        cache = AutomatonCache(A)
        for w in oracles.words(["a", "a'"], 5):
            assert accept(A, w, cache) == cho_accept(C, w)
