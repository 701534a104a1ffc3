import pytest

from blindcounter.blind import PreconditionError, accept, parse_word
from blindcounter.experiments import wp_sweep
from blindcounter.groups import (FiniteGroupTable, GenMap, GroupElement, GroupError,
                                 HeisenbergElement, VAGroup, build_t1, build_wp_automaton,
                                 evaluate, exchange_index, heisenberg_evaluate, heisenberg_wp,
                                 interchange_search, invert_word, swap_blocks, t1_factorization,
                                 wp_member)


@pytest.fixture
def dihedral():
    D = VAGroup.infinite_dihedral()
    return GenMap.from_generators(D, {"r": GroupElement((0,), 1), "t": GroupElement((1,), 0)})


def klein_on_z2():
    """Z^2 x| (C2 x C2), the factors negating one coordinate each."""
    mult = tuple(tuple(a ^ b for b in range(4)) for a in range(4))
    F = FiniteGroupTable(mult, (0, 1, 2, 3), 0)
    act = (((1, 0), (0, 1)), ((-1, 0), (0, 1)), ((1, 0), (0, -1)), ((-1, 0), (0, -1)))
    return VAGroup(2, F, act)


def test_table_laws_checked():
    with pytest.raises(GroupError):
        FiniteGroupTable(((0, 1), (1, 1)), (0, 1), 0)
    assert FiniteGroupTable.cyclic(5).size == 5


def test_action_checked():
    F = FiniteGroupTable.cyclic(2)
    with pytest.raises(GroupError):
        VAGroup(1, F, (((1,),), ((2,),)))
    with pytest.raises(GroupError):
        VAGroup(2, F, (((1, 0), (0, 1)), ((0, 1), (1, 1))))


def test_genmap_inverse_check():
    G = VAGroup.free_abelian(1)
    from blindcounter.blind import Alphabet
    with pytest.raises(GroupError):
        GenMap(G, Alphabet.from_generators("a"),
               {"a": GroupElement((1,), 0), "a'": GroupElement((1,), 0)})


def test_evaluate_examples(rng):
    g = GenMap.standard(2)
    assert evaluate(g, ()) == g.group.identity()
    assert evaluate(g, parse_word("a b a'")) == GroupElement((0, 1), 0)
    assert wp_member(g, parse_word("a a'")) and not wp_member(g, parse_word("a a"))
    with pytest.raises(PreconditionError):
        evaluate(g, ("c",))
    for _ in range(100):
        w = tuple(rng.choice(list(g.alphabet)) for _ in range(rng.randint(0, 10)))
        assert wp_member(g, w + g.alphabet.invert_word(w))


def test_semidirect_law(rng):
    G = klein_on_z2()

    def rand():
        return GroupElement((rng.randint(-5, 5), rng.randint(-5, 5)), rng.randrange(4))

    for _ in range(1000):
        x, y, z = rand(), rand(), rand()
        assert G.multiply(G.multiply(x, y), z) == G.multiply(x, G.multiply(y, z))
        assert G.multiply(x, G.inverse(x)) == G.identity()
        assert G.multiply(G.identity(), x) == x


def test_wp_automaton_z2():
    g = GenMap.standard(2)
    A = build_wp_automaton(g.group, g)
    assert len(A.states) == 1 and len(A.edges) == 4
    assert {(e.input, e.inc) for e in A.edges} == {("a", (1, 0)), ("a'", (-1, 0)), ("b", (0, 1)),
                                                    ("b'", (0, -1))}
    assert accept(A, parse_word("a b a' b'")) and accept(A, ())


def test_wp_automaton_dihedral(dihedral):
    A = build_wp_automaton(dihedral.group, dihedral)
    for text, expect in (("r r", True), ("r t r t", True), ("t t", False), ("", True)):
        w = parse_word(text)
        assert accept(A, w) == expect == wp_member(dihedral, w)


def test_wp_automaton_klein_sweep():
    G = klein_on_z2()
    g = GenMap.from_generators(G, {"a": GroupElement((1, 0), 0), "b": GroupElement((0, 1), 0),
                                   "c": GroupElement((0, 0), 1), "d": GroupElement((0, 0), 2)})
    assert wp_sweep(build_wp_automaton(G, g), g, 4).ok


def test_heisenberg_examples():
    assert heisenberg_evaluate(parse_word("x' y' x y")) == HeisenbergElement(0, 0, 1)
    assert heisenberg_evaluate(("x", "y")) == HeisenbergElement(1, 1, 1)
    assert heisenberg_evaluate(("y", "x")) == HeisenbergElement(1, 1, 0)
    assert heisenberg_evaluate(()) == HeisenbergElement(0, 0, 0)
    with pytest.raises(PreconditionError):
        heisenberg_evaluate(("w",))


def test_heisenberg_law_and_center(rng):
    def rand():
        return HeisenbergElement(rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6))

    c = HeisenbergElement(0, 0, 1)
    for _ in range(100):
        x, y = rand(), rand()
        assert x * y == HeisenbergElement(x.a + y.a, x.b + y.b, x.c + y.c + x.a * y.b)
        assert c * x == x * c
        assert x * x.inverse() == HeisenbergElement(0, 0, 0)


def test_exchange_index_examples():
    assert exchange_index(("x", "y")) == 0
    assert exchange_index(("y", "x")) == 1
    assert exchange_index(build_t1(3)) == 4
    assert exchange_index(("x",) * 3 + ("y",) * 4) == 0
    with pytest.raises(PreconditionError):
        exchange_index(("x", "z"))


def test_t1():
    assert "".join(build_t1(1)) == "xy"
    assert "".join(build_t1(3)) == "xyxyyxyyy"
    assert len(build_t1(10)) == 65
    for n in range(1, 13):
        assert exchange_index(build_t1(n)) == sum(k * (n - k) for k in range(1, n + 1))


def test_swap_blocks():
    parts = t1_factorization(3)
    assert "".join(swap_blocks(parts, 1, 2)) == "xyyxyxyyy"
    same = [(), ("a",), (), ("a",), ()]
    assert swap_blocks(same, 1, 2) == ("a", "a")
    with pytest.raises(PreconditionError):
        swap_blocks(parts, 2, 2)
    with pytest.raises(PreconditionError):
        swap_blocks([(), (), ()], 1, 1)


def test_square_law():
    for n in range(2, 13):
        base = exchange_index(build_t1(n))
        parts = t1_factorization(n)
        for r in range(1, n + 1):
            for s in range(r + 1, n + 1):
                assert exchange_index(swap_blocks(parts, r, s)) - base == (s - r) ** 2


def test_interchange_search_examples():
    g = GenMap.standard(2)
    A = build_wp_automaton(g.group, g)
    w = parse_word("a b a' b'")
    parts = [(), ("a",), (), ("b",), ("a'", "b'")]
    assert interchange_search(lambda u: accept(A, u), w, parts) == (1, 2)
    with pytest.raises(PreconditionError):
        interchange_search(lambda u: accept(A, u), ("a",), [(), ("a",), ()])


def test_heisenberg_interchange_fails():
    for n in range(2, 13):
        t1 = build_t1(n)
        tail = invert_word(t1)
        assert heisenberg_wp(t1 + tail)
        assert interchange_search(heisenberg_wp, t1 + tail, t1_factorization(n, tail)) is None
