import itertools
import random

import pytest

from conftest import brute_microstructure_arcs, make_csp
from tensorsat.csp import (
    BinaryCsp,
    KaryCsp,
    Relation,
    complete_relation,
    constraint_graph,
    dualize,
    identity_relation,
    is_arc_consistent,
    microstructure,
    microstructure_via_tensors,
    neq_relation,
    parse_csp,
    relation_subgraph,
    serialize_csp,
)
from tensorsat.generators import gen_mixed_csp, gen_neq_csp
from tensorsat.graph import (
    Digraph,
    FormatError,
    complement,
    complete_graph,
    empty_graph,
    tensor_product,
    underlying_graph,
    union,
)
from tensorsat.oracle import solve_exhaustive


def test_builtin_relations():
    assert identity_relation(3).graph.arcs == {(0, 0), (1, 1), (2, 2)}
    assert neq_relation(3).graph == complete_graph(3)
    c = complete_relation(3).graph
    assert c.arc_count == 9
    # C_k = I_k + N_k as an arc partition
    assert union(identity_relation(3).graph, neq_relation(3).graph) == c
    assert not (identity_relation(3).graph.arcs & neq_relation(3).graph.arcs)


def test_csp_invariants():
    with pytest.raises(ValueError):
        BinaryCsp(2, 2, {0: neq_relation(3)}, {})
    with pytest.raises(ValueError):
        BinaryCsp(2, 2, {0: neq_relation(2)}, {(1, 0): 0})
    with pytest.raises(ValueError):
        BinaryCsp(2, 2, {0: neq_relation(2)}, {(0, 1): 5})
    with pytest.raises(ValueError):
        BinaryCsp(0, 2)


def test_constraint_graph_examples():
    rel = {0: neq_relation(2)}
    assert constraint_graph(BinaryCsp(3, 2, rel, {(0, 1): 0, (1, 2): 0})).arcs == {
        (0, 1), (1, 0), (1, 2), (2, 1)}
    assert constraint_graph(BinaryCsp(4, 2, rel, {})) == empty_graph(4)
    all_pairs = {p: 0 for p in itertools.combinations(range(4), 2)}
    assert constraint_graph(BinaryCsp(4, 2, rel, all_pairs)) == complete_graph(4)


def test_relation_subgraph():
    eq, ne = identity_relation(2, 0), neq_relation(2, 1)
    csp = BinaryCsp(4, 2, {0: eq, 1: ne}, {(0, 1): 0, (1, 2): 1, (2, 3): 0, (0, 3): 1})
    g_eq, g_ne = relation_subgraph(csp, 0), relation_subgraph(csp, 1)
    assert not (g_eq.arcs & g_ne.arcs)
    assert union(g_eq, g_ne) == constraint_graph(csp)
    single = gen_neq_csp(6, 0.5, 3, seed=2)
    assert relation_subgraph(single, 0) == constraint_graph(single)
    unused = BinaryCsp(3, 2, {0: eq, 1: ne}, {(0, 1): 0})
    assert relation_subgraph(unused, 1) == empty_graph(3)
    with pytest.raises(KeyError):
        relation_subgraph(unused, 9)


def test_microstructure_triangle_neq2_is_six_cycle(triangle_neq2):
    m = microstructure(triangle_neq2)
    assert m.arcs == brute_microstructure_arcs(triangle_neq2)
    assert m == tensor_product(complete_graph(3), complete_graph(2))
    u = underlying_graph(m)
    assert (u.out_degrees() == 2).all()
    # one cycle through all six nodes
    seen, v, prev = {0}, 0, None
    while True:
        nxt = [w for w in u.successors(v).tolist() if w != prev][0]
        if nxt == 0:
            break
        seen.add(nxt)
        prev, v = v, nxt
    assert len(seen) == 6


def test_microstructure_unconstrained_pair_is_complete_bipartite():
    m = microstructure(BinaryCsp(2, 2))
    assert m.arcs == {(u, w) for u in (0, 1) for w in (2, 3)} | {(w, u) for u in (0, 1) for w in (2, 3)}


def test_microstructure_brute_force_random():
    rng = random.Random(5)
    for i in range(60):
        csp = gen_mixed_csp(rng.randint(1, 6), rng.random(), rng.randint(1, 4),
                            rng.randint(1, 3), seed=i)
        m = microstructure(csp)
        assert m.arcs == brute_microstructure_arcs(csp)
        assert not m.has_loops
        k = csp.k
        for x in range(csp.n):
            block = set(range(x * k, (x + 1) * k))
            assert not any(u in block and v in block for u, v in m.arcs)


def test_microstructure_symmetric_for_symmetric_relations():
    for seed in range(20):
        csp = gen_neq_csp(8, 0.5, 3, seed)
        assert microstructure(csp).is_symmetric


def test_via_tensors_examples(triangle_neq2):
    for csp in (triangle_neq2, BinaryCsp(2, 2), gen_neq_csp(7, 0.4, 3, 1)):
        assert microstructure_via_tensors(csp) == microstructure(csp)


def test_via_tensors_single_relation_simple_expression():
    csp = gen_neq_csp(9, 0.5, 3, seed=4)
    g = constraint_graph(csp)
    expected = union(tensor_product(g, neq_relation(3).graph),
                     tensor_product(complement(g), complete_relation(3).graph))
    assert microstructure_via_tensors(csp) == expected


def test_via_tensors_no_constraints():
    csp = BinaryCsp(4, 3)
    assert microstructure_via_tensors(csp) == tensor_product(complete_graph(4),
                                                             complete_relation(3).graph)


def test_decomposition_identity_asymmetric_multi_relation():
    rng = random.Random(17)
    for seed in range(150):
        csp = gen_mixed_csp(rng.randint(1, 12), rng.random(), rng.randint(1, 5),
                            rng.randint(1, 4), seed=seed)
        assert microstructure_via_tensors(csp) == microstructure(csp)


def test_arc_consistency():
    for k in (2, 3, 5):
        assert is_arc_consistent(gen_neq_csp(10, 0.6, k, seed=k))
    k1 = BinaryCsp(2, 1, {0: neq_relation(1)}, {(0, 1): 0})
    assert not is_arc_consistent(k1)
    isolated = make_csp(2, 3, {0: [(0, 1), (1, 0)]}, {(0, 1): 0})
    assert not is_arc_consistent(isolated)
    # row support but a column without support
    one_way = make_csp(2, 2, {0: [(0, 0), (1, 0)]}, {(0, 1): 0})
    assert not is_arc_consistent(one_way)
    assert is_arc_consistent(BinaryCsp(3, 1))


# -- dual encoding -------------------------------------------------------------

def test_dualize_shared_variable_agreement():
    full = frozenset(itertools.product(range(2), repeat=2))
    kcsp = KaryCsp(3, 2, (((0, 1), full), ((1, 2), full)))
    dual = dualize(kcsp)
    assert dual.n == 2 and dual.k == 4
    rel = dual.relations[dual.constraints[(0, 1)]]
    t = sorted(full)
    expected = {(a, b) for a in range(4) for b in range(4) if t[a][1] == t[b][0]}
    assert rel.graph.arcs == expected


def test_dualize_disjoint_scopes_unconstrained():
    a = frozenset({(0,), (1,)})
    dual = dualize(KaryCsp(2, 2, (((0,), a), ((1,), a))))
    assert dual.constraints == {}


def test_dualize_padding_excluded():
    kcsp = KaryCsp(2, 3, (((0,), frozenset({(0,), (1,), (2,)})), ((1,), frozenset({(2,)}))))
    dual = dualize(kcsp)
    assert dual.k == 3
    rel = dual.relations[dual.constraints[(0, 1)]].graph
    # slot 0 of dual variable 1 is real; slots 1, 2 are padding
    assert rel.arcs == {(a, 0) for a in range(3)}


def test_dualize_empty_constraint_rejected():
    with pytest.raises(ValueError):
        dualize(KaryCsp(2, 2, (((0, 1), frozenset()),)))


def _random_kary(rng, n, k):
    cons = []
    for _ in range(rng.randint(1, 4)):
        arity = rng.randint(1, min(3, n))
        scope = tuple(rng.sample(range(n), arity))
        allowed = {t for t in itertools.product(range(k), repeat=arity) if rng.random() < 0.5}
        if not allowed:
            allowed = {tuple(rng.randrange(k) for _ in range(arity))}
        cons.append((scope, frozenset(allowed)))
    return KaryCsp(n, k, tuple(cons))


def test_dualize_preserves_satisfiability():
    rng = random.Random(23)
    outcomes = set()
    for _ in range(300):
        kcsp = _random_kary(rng, rng.randint(1, 4), rng.randint(1, 3))
        sat, _ = solve_exhaustive(kcsp)
        dsat, _ = solve_exhaustive(dualize(kcsp))
        assert sat == dsat
        outcomes.add(sat)
    assert outcomes == {True, False}


# -- text format ---------------------------------------------------------------

def test_parse_minimal():
    csp = parse_csp("p csp 2 2\nr 0 2\nt 0 1\nt 1 0\ne 0 1 0\n")
    assert csp == BinaryCsp(2, 2, {0: neq_relation(2)}, {(0, 1): 0})


def test_parse_empty_relation_and_comments():
    csp = parse_csp("c x\np csp 3 2\nr 4 0\nr 1 1\nt 1 1\ne 0 2 4\n")
    assert csp.relations[4].graph.arc_count == 0
    assert csp.constraints == {(0, 2): 4}


@pytest.mark.parametrize("text", [
    "p csp 2 3\nr 0 1\nt 0 3\n",
    "p csp 2 2\ne 0 1 0\n",
    "p csp 2 2\nr 0 0\ne 0 1 0\ne 0 1 0\n",
    "p csp 2 2\nr 0 0\ne 1 0 0\n",
    "p csp 2 2\nr 0 2\nt 0 1\n",
    "p csp 2 2\nr 0 1\nt 0 1\nt 1 0\n",
    "p csp 2 2\nr 0 0\nr 0 0\n",
    "p kcsp 2 2\n",
    "r 0 0\n",
    "p csp 2 2\nx 1\n",
])
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse_csp(text)


def test_round_trip_generated():
    rng = random.Random(1)
    for seed in range(100):
        csp = gen_mixed_csp(rng.randint(1, 10), rng.random(), rng.randint(1, 4),
                            rng.randint(1, 3), seed=seed)
        text = serialize_csp(csp)
        back = parse_csp(text)
        assert back == csp
        assert serialize_csp(back) == text


def test_constraint_graph_is_symmetric_by_arcs():
    from tensorsat.generators import gen_neq_csp
    g = constraint_graph(gen_neq_csp(12, 0.4, 2, seed=4))
    assert g.is_symmetric and all((v, u) in g.arcs for u, v in g.arcs)
