from itertools import product

import pytest

from blindcounter.blind import BlindAutomaton, Edge
from blindcounter.experiments import (ExchangeReport, GrowthTable, ball, ball_sizes,
                                      exchange_equivalence, growth_degree_estimate,
                                      heisenberg_interchange_experiment, witness_map_experiment,
                                      wp_sweep)
from blindcounter.config import Config, ResourceLimitError
from blindcounter.groups import (GenMap, GroupElement, HeisenbergGroup, VAGroup,
                                 build_wp_automaton)

HEIS_GENS = ["x", "x'", "y", "y'"]


def test_ball_radius_zero():
    g = GenMap.standard(2)
    assert ball_sizes(g.group, g, 0).sizes == [1]
    assert ball_sizes(HeisenbergGroup(), HEIS_GENS, 0).sizes == [1]


def test_ball_z2_small():
    g = GenMap.standard(2)
    assert ball_sizes(g.group, g, 2).sizes == [1, 5, 13]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ball_matches_lattice_count(n):
    g = GenMap.standard(n)
    sizes = ball_sizes(g.group, g, 10 if n < 3 else 7).sizes
    for r, s in enumerate(sizes):
        assert s == sum(1 for v in product(range(-r, r + 1), repeat=n) if sum(map(abs, v)) <= r)


def test_heisenberg_grows_faster():
    z2 = GenMap.standard(2)
    h = ball_sizes(HeisenbergGroup(), HEIS_GENS, 3).sizes
    assert h[3] > ball_sizes(z2.group, z2, 3).sizes[3]


def test_ball_words_are_minimal_and_lexicographic():
    g = GenMap.standard(2)
    B = ball(g.group, [(x, g.images[x]) for x in g.alphabet], 2)
    assert B.words[:5] == [(), ("a",), ("a'",), ("b",), ("b'",)]
    assert all(len(w) == r for w, r in zip(B.words, B.lengths))


def test_ball_cap():
    g = GenMap.standard(2)
    with pytest.raises(ResourceLimitError):
        ball_sizes(g.group, g, 10, cap=50)


def test_degree_estimates():
    z1, z2 = GenMap.standard(1), GenMap.standard(2)
    assert 0.9 <= growth_degree_estimate(ball_sizes(z1.group, z1, 20)) <= 1.1
    assert 1.8 <= growth_degree_estimate(ball_sizes(z2.group, z2, 20)) <= 2.2
    assert growth_degree_estimate(GrowthTable([1, 4, 4, 4, 4, 4])) <= 0.1
    with pytest.raises(ValueError):
        growth_degree_estimate(GrowthTable([1, 3, 5]))


def test_witness_z1():
    g = GenMap.standard(1)
    rep = witness_map_experiment(build_wp_automaton(g.group, g), g.group, g, 5)
    assert rep.ok and len(rep.rows) == 11
    assert rep.R == 1
    assert all(r.norm == r.length for r in rep.rows)
    assert rep.rows[0].witness == (0,) and rep.rows[0].length == 0


def test_witness_z2_parallel_matches_serial():
    g = GenMap.standard(2)
    A = build_wp_automaton(g.group, g)
    one = witness_map_experiment(A, g.group, g, 3)
    many = witness_map_experiment(A, g.group, g, 3, config=Config(workers=4))
    assert one.to_dict() == many.to_dict() and one.ok


def test_witness_detects_fault():
    g = GenMap.standard(2)
    A = build_wp_automaton(g.group, g)
    edges = list(A.edges)
    e = edges[0]
    edges[0] = Edge(e.src, (e.inc[0] + 1, e.inc[1]), e.input, e.dst)
    bad = BlindAutomaton(A.dim, A.alphabet, A.states, A.initial, A.terminals, tuple(edges))
    rep = witness_map_experiment(bad, g.group, g, 3)
    assert not rep.ok and rep.sanity_failures


def test_witness_dihedral():
    D = VAGroup.infinite_dihedral()
    g = GenMap.from_generators(D, {"r": GroupElement((0,), 1), "t": GroupElement((1,), 0)})
    rep = witness_map_experiment(build_wp_automaton(D, g), D, g, 4)
    assert rep.ok and rep.R == 2
    assert max(rep.multiplicity.values()) == 2


def test_interchange_small():
    rep = heisenberg_interchange_experiment(3)
    assert [(r["r"], r["s"], r["delta"]) for r in rep.rows] == [(1, 2, 1), (1, 3, 4), (2, 3, 1)]
    assert rep.ok and rep.accepted_swap is None
    rep2 = heisenberg_interchange_experiment(2)
    assert [(r["r"], r["s"], r["delta"]) for r in rep2.rows] == [(1, 2, 1)]


def test_interchange_twelve():
    rep = heisenberg_interchange_experiment(12)
    assert len(rep.rows) == 66 and rep.ok


def test_exchange_equivalence():
    rep = exchange_equivalence(8)
    assert isinstance(rep, ExchangeReport) and rep.ok and rep.words == 511


def test_wp_sweeps():
    for n in (1, 2):
        g = GenMap.standard(n)
        assert wp_sweep(build_wp_automaton(g.group, g), g, 6).ok


def test_reports_render():
    g = GenMap.standard(1)
    t = ball_sizes(g.group, g, 5)
    assert "degree estimate" in t.to_text()
    assert t.to_dict()["sizes"] == [1, 3, 5, 7, 9, 11]
    assert "all checks pass" in heisenberg_interchange_experiment(3).to_text()
