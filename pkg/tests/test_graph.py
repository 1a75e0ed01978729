import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import brute_tensor_arcs, digraphs, graphs, random_digraph, random_graph
from tensorsat.graph import (
    Digraph,
    FormatError,
    complement,
    complete_graph,
    empty_graph,
    parse_graph,
    serialize_graph,
    tensor_product,
    underlying_graph,
    union,
)

K2 = complete_graph(2)
L1 = Digraph(1, [(0, 0)])


def test_k2_tensor_k2_is_two_disjoint_edges():
    t = tensor_product(K2, K2)
    assert t.node_count == 4
    # 0_0=0, 0_1=1, 1_0=2, 1_1=3
    assert t.arcs == {(0, 3), (3, 0), (1, 2), (2, 1)}


@given(digraphs())
def test_loop_identity_factor(g):
    assert tensor_product(L1, g) == g
    assert tensor_product(g, L1) == g


@given(digraphs(max_nodes=5), digraphs(max_nodes=5))
def test_tensor_matches_definition(g, h):
    t = tensor_product(g, h)
    assert t.node_count == g.node_count * h.node_count
    assert t.arcs == brute_tensor_arcs(g, h)


@given(digraphs(), digraphs())
def test_tensor_degree_identity(g, h):
    t = tensor_product(g, h)
    nh = h.node_count
    for a in range(g.node_count):
        for b in range(nh):
            v = a * nh + b
            assert t.out_degrees()[v] == g.out_degrees()[a] * h.out_degrees()[b]
            assert t.in_degrees()[v] == g.in_degrees()[a] * h.in_degrees()[b]


def test_tensor_commutes_under_index_transposition():
    rng = random.Random(3)
    for _ in range(300):
        g = random_digraph(rng, rng.randint(1, 5))
        h = random_digraph(rng, rng.randint(1, 5))
        ng, nh = g.node_count, h.node_count
        gh, hg = tensor_product(g, h), tensor_product(h, g)
        swap = lambda i: (i % nh) * ng + i // nh
        assert {(swap(u), swap(v)) for u, v in gh.arcs} == hg.arcs


@given(digraphs(loops=True), digraphs(loops=False))
def test_tensor_loopless_when_one_factor_loopless(g, h):
    assert not tensor_product(g, h).has_loops
    assert not tensor_product(h, g).has_loops


def test_tensor_of_looped_factors_has_loops():
    assert tensor_product(L1, L1).has_loops


def test_tensor_distributes_over_arc_partition():
    rng = random.Random(11)
    for _ in range(200):
        g = random_digraph(rng, rng.randint(1, 5))
        r = random_digraph(rng, rng.randint(1, 4), density=0.6)
        arcs = sorted(r.arcs)
        part = [a for a in arcs if rng.random() < 0.5]
        ra = Digraph(r.node_count, part)
        rb = Digraph(r.node_count, [a for a in arcs if a not in set(part)])
        assert tensor_product(g, r) == union(tensor_product(g, ra), tensor_product(g, rb))


def test_union_examples():
    g = Digraph(3, [(0, 1), (1, 0)])
    h = Digraph(3, [(1, 2), (2, 1)])
    assert union(g, empty_graph(3)) == g
    assert union(g, g) == g
    assert union(g, h).arcs == {(0, 1), (1, 0), (1, 2), (2, 1)}
    with pytest.raises(ValueError):
        union(g, empty_graph(4))


@pytest.mark.parametrize("n", [0, 1, 4, 7])
def test_complement_of_complete_and_empty(n):
    assert complement(complete_graph(n)) == empty_graph(n)
    assert complement(empty_graph(n)) == complete_graph(n)


@given(graphs())
def test_complement_involution(g):
    assert complement(complement(g)) == g


def test_complement_rejects_loops_and_asymmetry():
    with pytest.raises(ValueError):
        complement(L1)
    with pytest.raises(ValueError):
        complement(Digraph(2, [(0, 1)]))


def test_underlying_graph():
    assert underlying_graph(Digraph(2, [(0, 1)])).arcs == {(0, 1), (1, 0)}
    tri = underlying_graph(Digraph(3, [(0, 1), (1, 2), (2, 0)]))
    assert tri == complete_graph(3)
    g = Digraph(2, [(0, 0), (0, 1), (1, 0)])
    assert underlying_graph(g) == g


@given(digraphs())
def test_symmetric_flag_consistent(g):
    assert g.is_symmetric == all((v, u) in g.arcs for u, v in g.arcs)
    assert underlying_graph(g).is_symmetric


def test_successors_and_active_nodes():
    g = Digraph(4, [(0, 2), (0, 1), (3, 3)])
    assert g.successors(0).tolist() == [1, 2]
    assert g.successors(1).tolist() == []
    assert g.active_nodes() == 4
    assert Digraph(5, [(1, 2)]).active_nodes() == 2


def test_parse_examples():
    assert parse_graph("p digraph 2 1\na 0 1\n").arcs == {(0, 1)}
    g = parse_graph("p graph 1 1\ne 0 0\n")
    assert g.node_count == 1 and g.arcs == {(0, 0)}
    assert parse_graph("c hello\np graph 3 1\nc mid\ne 2 0\n").arcs == {(0, 2), (2, 0)}


@pytest.mark.parametrize("text", [
    "p graf 2 1\ne 0 1\n",
    "p graph 2\n",
    "e 0 1\n",
    "p graph 2 1\ne 0 2\n",
    "p digraph 2 2\na 0 1\na 0 1\n",
    "p graph 2 2\ne 0 1\ne 1 0\n",
    "p graph 2 2\ne 0 1\n",
    "p digraph 2 1\ne 0 1\n",
    "",
])
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse_graph(text)


def test_round_trip_random():
    rng = random.Random(0)
    for i in range(100):
        n = rng.randint(0, 9)
        g = random_graph(rng, n) if i % 2 else random_digraph(rng, n)
        text = serialize_graph(g)
        assert parse_graph(text) == g
        assert serialize_graph(parse_graph(text)) == text


def test_serialized_product_is_row_major():
    text = serialize_graph(tensor_product(Digraph(2, [(0, 1)]), Digraph(2, [(1, 0)])))
    assert text == "p digraph 4 1\na 1 2\n"


def test_from_matrix_roundtrip():
    m = np.array([[0, 1], [1, 1]])
    g = Digraph.from_matrix(m)
    assert g.arcs == {(0, 1), (1, 0), (1, 1)}
    assert g.loops().tolist() == [1]


def test_from_matrix_accepts_another_graphs_adjacency():
    g = Digraph(3, [(0, 1), (1, 2)])
    h = Digraph.from_matrix(g.adjacency)
    assert h == g and h.adjacency is not g.adjacency


def _symmetric_by_arcs(g):
    return all((v, u) in g.arcs for u, v in g.arcs)


@given(digraphs(max_nodes=4), digraphs(max_nodes=4))
def test_derived_symmetry_flags_are_correct(g, h):
    assert tensor_product(g, h).is_symmetric == _symmetric_by_arcs(tensor_product(g, h))
    u = underlying_graph(g)
    assert u.is_symmetric and _symmetric_by_arcs(u)
    s = underlying_graph(Digraph(g.node_count, [(a, b) for a, b in g.arcs if a != b]))
    assert complement(s).is_symmetric and _symmetric_by_arcs(complement(s))
