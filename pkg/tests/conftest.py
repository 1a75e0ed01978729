import itertools
import random

import pytest
from hypothesis import strategies as st

from tensorsat.csp import BinaryCsp, Relation
from tensorsat.graph import Digraph


def brute_tensor_arcs(g: Digraph, h: Digraph) -> set:
    """Arc set of g (x) h straight from the definition."""
    nh = h.node_count
    return {(a * nh + b, c * nh + d) for a, c in g.arcs for b, d in h.arcs}


def brute_microstructure_arcs(csp: BinaryCsp) -> set:
    """Arc set of the microstructure by enumerating every (x_u, y_w)."""
    n, k = csp.n, csp.k
    arcs = set()
    for x, y in itertools.permutations(range(n), 2):
        if (x, y) in csp.constraints:
            allowed = csp.relations[csp.constraints[(x, y)]].graph.arcs
        elif (y, x) in csp.constraints:
            allowed = {(w, u) for u, w in csp.relations[csp.constraints[(y, x)]].graph.arcs}
        else:
            allowed = set(itertools.product(range(k), repeat=2))
        for u, w in allowed:
            arcs.add((x * k + u, y * k + w))
    return arcs


def random_digraph(rng: random.Random, n: int, density=0.4, loops=True) -> Digraph:
    arcs = [(u, v) for u in range(n) for v in range(n)
            if (loops or u != v) and rng.random() < density]
    return Digraph(n, arcs)


def random_graph(rng: random.Random, n: int, density=0.4) -> Digraph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < density]
    return Digraph(n, edges + [(v, u) for u, v in edges])


@st.composite
def digraphs(draw, max_nodes=6, loops=True):
    n = draw(st.integers(0, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Digraph(n, chosen)


@st.composite
def graphs(draw, max_nodes=6):
    n = draw(st.integers(0, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Digraph(n, chosen + [(v, u) for u, v in chosen])


@pytest.fixture
def triangle_neq2():
    from tensorsat.generators import gen_neq_csp
    return gen_neq_csp(3, 1.0, 2, seed=0)


def make_csp(n, k, relations, constraints):
    rels = {rid: Relation(rid, Digraph(k, arcs)) for rid, arcs in relations.items()}
    return BinaryCsp(n, k, rels, constraints)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
