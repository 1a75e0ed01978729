"""Seeded instance families.

* ``GNP_NEQ``: disequality CSPs on an Erdos-Renyi constraint graph.
* ``CLIQUE_UNION``: n+1 cliques of size n meeting pairwise in one node.
* ``DISJOINT_CLIQUES``: c disjoint s-cliques under disequality, provable
  by the fast tensor method whenever k^2 * c < c * s.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .csp import BinaryCsp, Relation, neq_relation
from .graph import Digraph
from .rng import SeededStream, derive_seed, family_tag

__all__ = [
    "GNP_NEQ",
    "CLIQUE_UNION",
    "DISJOINT_CLIQUES",
    "FAMILIES",
    "GenSpec",
    "gen_gnp",
    "gen_neq_csp",
    "clique_union_matrix",
    "format_matrix",
    "gen_clique_union_csp",
    "gen_disjoint_cliques_csp",
    "gen_mixed_csp",
    "generate",
]

GNP_NEQ = "gnp-neq"
CLIQUE_UNION = "clique-union"
DISJOINT_CLIQUES = "disjoint-cliques"
FAMILIES = (GNP_NEQ, CLIQUE_UNION, DISJOINT_CLIQUES)


@dataclass(frozen=True)
class GenSpec:
    """One instance request.

    ``p_index`` names the grid position of ``p`` so that the seed does not
    depend on float formatting.
    """

    family: str
    n: int = 0
    p: float = 0.0
    k: int = 2
    c: int = 1
    s: int = 2
    master_seed: int = 0
    replicate: int = 0
    p_index: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == GNP_NEQ:
            if self.n < 1 or not 0.0 <= self.p <= 1.0 or self.k < 2:
                raise ValueError("gnp-neq needs n >= 1, 0 <= p <= 1, k >= 2")
        elif self.family == CLIQUE_UNION:
            if self.n < 2:
                raise ValueError("clique-union needs n >= 2")
        elif self.c < 1 or self.s < 2 or self.k < 2:
            raise ValueError("disjoint-cliques needs c >= 1, s >= 2, k >= 2")

    def seed(self) -> int:
        """Per-instance seed: master seed split by (family, n, p_index, k, replicate)."""
        size = self.n if self.family != DISJOINT_CLIQUES else self.c * 1000 + self.s
        return derive_seed(self.master_seed, family_tag(self.family), size,
                           self.p_index, self.k, self.replicate)


def gen_gnp(n: int, p: float, seed: int) -> Digraph:
    """G(n, p); pairs (u, v), u < v, are drawn in ascending order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    iu, iv = np.triu_indices(n, k=1)
    keep = SeededStream(seed).bernoulli(p, len(iu))
    u, v = iu[keep], iv[keep]
    return Digraph(n, np.concatenate([np.stack([u, v], 1), np.stack([v, u], 1)]))


def _csp_from_edges(n: int, k: int, rel: Relation, edges) -> BinaryCsp:
    cons = {(min(x, y), max(x, y)): rel.id for x, y in edges if x != y}
    return BinaryCsp(n, k, {rel.id: rel}, cons)


def gen_neq_csp(n: int, p: float, k: int, seed: int) -> BinaryCsp:
    if k < 2:
        raise ValueError("the disequality relation is empty for k < 2")
    g = gen_gnp(n, p, seed)
    return _csp_from_edges(n, k, neq_relation(k), ((u, v) for u, v in g.arcs if u < v))


def clique_union_matrix(n: int) -> np.ndarray:
    """(n+1) x n matrix of 1-based node labels; row i is the i-th clique."""
    if n < 2:
        raise ValueError("need n >= 2")
    mat = np.zeros((n + 2, n + 1), dtype=np.int64)
    elem = 1
    for j in range(1, n + 1):
        for i in range(1, j + 1):
            mat[i, j] = elem
            mat[j + 1, i] = elem
            elem += 1
    return mat[1:, 1:]


def format_matrix(mat: np.ndarray) -> str:
    """Bracketed rows with single spaces, e.g. ``[[1 2]\\n [1 3]\\n [2 3]]``."""
    rows = [" ".join(str(int(x)) for x in row) for row in mat]
    return "[[" + "]\n [".join(rows) + "]]"


def gen_clique_union_csp(n: int) -> BinaryCsp:
    """Coloring CSP (domain n, disequality) of the clique-union graph.

    Node ``v`` is matrix label ``v + 1``.
    """
    mat = clique_union_matrix(n) - 1
    edges = set()
    for row in mat:
        edges.update(itertools.combinations(sorted(row.tolist()), 2))
    return _csp_from_edges(n * (n + 1) // 2, n, neq_relation(n), edges)


def gen_disjoint_cliques_csp(c: int, s: int, k: int) -> BinaryCsp:
    if c < 1 or s < 2 or k < 2:
        raise ValueError("need c >= 1, s >= 2, k >= 2")
    edges = []
    for b in range(c):
        edges += itertools.combinations(range(b * s, (b + 1) * s), 2)
    return _csp_from_edges(c * s, k, neq_relation(k), edges)


def gen_mixed_csp(n: int, p: float, k: int, relation_count: int, seed: int,
                  density: float = 0.5, loopless: bool = False) -> BinaryCsp:
    """Random CSP with several random (generally asymmetric) relations.

    Constraint pairs come from G(n, p); each relation allows every value
    pair independently with probability ``density``; each constraint picks
    one relation uniformly.
    """
    stream = SeededStream(seed)
    g = gen_gnp(n, p, stream.seed64())
    relations = {}
    for rid in range(relation_count):
        m = stream.bernoulli(density, k * k).reshape(k, k)
        if loopless:
            np.fill_diagonal(m, False)
        relations[rid] = Relation(rid, Digraph.from_matrix(m))
    cons = {}
    for u, v in sorted(g.arcs):
        if u < v:
            cons[(u, v)] = stream.below(relation_count)
    return BinaryCsp(n, k, relations, cons)


def generate(spec: GenSpec) -> BinaryCsp:
    if spec.family == GNP_NEQ:
        return gen_neq_csp(spec.n, spec.p, spec.k, spec.seed())
    if spec.family == CLIQUE_UNION:
        return gen_clique_union_csp(spec.n)
    return gen_disjoint_cliques_csp(spec.c, spec.s, spec.k)
