"""Binary CSPs, their microstructure, and the dual encoding of k-ary CSPs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .graph import (
    Digraph,
    FormatError,
    complement,
    complete_graph,
    tensor_product,
)

__all__ = [
    "Relation",
    "BinaryCsp",
    "KaryCsp",
    "identity_relation",
    "neq_relation",
    "complete_relation",
    "constraint_graph",
    "relation_subgraph",
    "oriented_subgraph",
    "microstructure",
    "microstructure_via_tensors",
    "is_arc_consistent",
    "dualize",
    "parse_csp",
    "serialize_csp",
]


@dataclass(frozen=True, eq=False)
class Relation:
    """A binary relation on ``{0..k-1}``; arc (u, w) means the pair is allowed."""

    id: int
    graph: Digraph

    @property
    def domain_size(self) -> int:
        return self.graph.node_count

    @property
    def is_loopless(self) -> bool:
        return not self.graph.has_loops

    def transpose(self) -> "Relation":
        return Relation(self.id, self.graph.transpose())

    def matrix(self) -> np.ndarray:
        return self.graph.adjacency.toarray()

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.id == other.id and self.graph == other.graph

    __hash__ = None


def identity_relation(k: int, rel_id: int = 0) -> Relation:
    """I_k, the equality relation (loops only)."""
    return Relation(rel_id, Digraph(k, [(v, v) for v in range(k)]))


def neq_relation(k: int, rel_id: int = 0) -> Relation:
    """N_k, the disequality relation (complete graph, no loops)."""
    return Relation(rel_id, complete_graph(k))


@cache
def complete_relation(k: int, rel_id: int = 0) -> Relation:
    """C_k, the universal relation (complete graph with every loop)."""
    return Relation(rel_id, complete_graph(k, loops=True))


@dataclass(frozen=True)
class BinaryCsp:
    """``n`` variables over the domain ``{0..k-1}``.

    ``constraints`` maps an ordered pair ``(x, y)`` with ``x < y`` to a
    relation id; the direction ``(y, x)`` uses the transposed relation.
    Unconstrained pairs carry the universal relation implicitly.
    """

    n: int
    k: int
    relations: Mapping[int, Relation] = field(default_factory=dict)
    constraints: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("need n >= 1 and k >= 1")
        for rid, rel in self.relations.items():
            if rel.id != rid:
                raise ValueError(f"relation table key {rid} != relation id {rel.id}")
            if rel.domain_size != self.k:
                raise ValueError(
                    f"relation {rid} has domain size {rel.domain_size}, CSP has k={self.k}"
                )
        for (x, y), rid in self.constraints.items():
            if not (0 <= x < y < self.n):
                raise ValueError(f"constraint pair ({x}, {y}) must satisfy 0 <= x < y < n")
            if rid not in self.relations:
                raise ValueError(f"constraint ({x}, {y}) references unknown relation {rid}")

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Constraints as parallel arrays ``(x, y, rel_id)``, sorted by pair."""
        items = sorted(self.constraints.items())
        a = np.array([(x, y, r) for (x, y), r in items], dtype=np.int64).reshape(-1, 3)
        return a[:, 0], a[:, 1], a[:, 2]

    def used_relations(self) -> list[int]:
        return sorted(set(self.constraints.values()))

    def relation_between(self, x: int, y: int) -> np.ndarray | None:
        """Allowed-pair matrix for ``(x, y)`` in that orientation, or None if unconstrained."""
        if x < y:
            rid = self.constraints.get((x, y))
            return None if rid is None else self.relations[rid].matrix()
        rid = self.constraints.get((y, x))
        return None if rid is None else self.relations[rid].matrix().T

    def is_solution(self, assignment) -> bool:
        for (x, y), rid in self.constraints.items():
            if not self.relations[rid].graph.has_arc(assignment[x], assignment[y]):
                return False
        return True


@dataclass(frozen=True)
class KaryCsp:
    """A CSP with constraints of arbitrary arity, given as allowed tuples."""

    n: int
    k: int
    constraints: tuple[tuple[tuple[int, ...], frozenset[tuple[int, ...]]], ...] = ()

    def __post_init__(self):
        cons = tuple((tuple(scope), frozenset(map(tuple, allowed)))
                     for scope, allowed in self.constraints)
        object.__setattr__(self, "constraints", cons)
        for scope, allowed in cons:
            if len(scope) < 1:
                raise ValueError("constraint scope must be nonempty")
            if len(set(scope)) != len(scope):
                raise ValueError(f"scope {scope} repeats a variable")
            if any(not 0 <= x < self.n for x in scope):
                raise ValueError(f"scope {scope} has a variable outside [0, {self.n})")
            for t in allowed:
                if len(t) != len(scope):
                    raise ValueError(f"tuple {t} does not match scope {scope}")
                if any(not 0 <= v < self.k for v in t):
                    raise ValueError(f"tuple {t} has a value outside [0, {self.k})")


# -- graphs derived from a CSP -------------------------------------------------

def constraint_graph(csp: BinaryCsp) -> Digraph:
    xs, ys, _ = csp.edge_arrays
    g = Digraph(csp.n, np.stack([np.concatenate([xs, ys]), np.concatenate([ys, xs])], axis=1))
    g._symmetric = True
    return g


def relation_subgraph(csp: BinaryCsp, rel_id: int) -> Digraph:
    """G(R_i): the constraint edges labelled ``rel_id``, as an undirected graph."""
    if rel_id not in csp.relations:
        raise KeyError(f"unknown relation id {rel_id}")
    g = oriented_subgraph(csp, rel_id)
    return Digraph.from_matrix(g.adjacency + g.adjacency.T)


def oriented_subgraph(csp: BinaryCsp, rel_id: int) -> Digraph:
    """G(R_i) with each edge oriented from the smaller to the larger variable."""
    if rel_id not in csp.relations:
        raise KeyError(f"unknown relation id {rel_id}")
    xs, ys, rs = csp.edge_arrays
    sel = rs == rel_id
    return Digraph(csp.n, np.stack([xs[sel], ys[sel]], axis=1))


def microstructure(csp: BinaryCsp) -> Digraph:
    """Microstructure digraph, built straight from its definition.

    Node ``x_v`` is ``x*k + v``. There is an arc ``(x_u, y_w)`` iff ``x != y``
    and ``(u, w)`` is allowed between x and y (all pairs if unconstrained).
    """
    n, k = csp.n, csp.k
    blocks = np.ones((n, k, n, k), dtype=bool)
    for (x, y), rid in csp.constraints.items():
        r = csp.relations[rid].matrix()
        blocks[x, :, y, :] = r
        blocks[y, :, x, :] = r.T
    for x in range(n):
        blocks[x, :, x, :] = False
    return Digraph.from_matrix(sp.csr_matrix(blocks.reshape(n * k, n * k)))


def microstructure_via_tensors(csp: BinaryCsp) -> Digraph:
    """Microstructure as a union of tensor products.

    One term ``G(R_i) (x) R_i`` per relation (plus its reverse orientation
    paired with the transposed relation) and the term ``G' (x) C_k`` for the
    unconstrained pairs.
    """
    n, k = csp.n, csp.k
    total = sp.csr_matrix((n * k, n * k), dtype=bool)
    for rid in csp.used_relations():
        term = tensor_product(oriented_subgraph(csp, rid), csp.relations[rid].graph)
        total = total + term.adjacency + term.adjacency.T
    rest = tensor_product(complement(constraint_graph(csp)), complete_relation(k).graph)
    return Digraph.from_matrix(total + rest.adjacency)


def is_arc_consistent(csp: BinaryCsp) -> bool:
    for rid in set(csp.constraints.values()):
        r = csp.relations[rid].matrix()
        if not (r.any(axis=1).all() and r.any(axis=0).all()):
            return False
    return True


# -- dual encoding -------------------------------------------------------------

def dualize(kcsp: KaryCsp) -> BinaryCsp:
    """Dual encoding: one variable per constraint, values are its allowed tuples.

    Dual variables share a domain whose size is the largest tuple count;
    slots past a constraint's own tuple count are padding and are made
    incompatible with every value of every other dual variable.
    """
    cons = kcsp.constraints
    for i, (scope, allowed) in enumerate(cons):
        if not allowed:
            raise ValueError(f"constraint {i} on {scope} allows no tuples (trivially unsatisfiable)")
    if not cons:
        return BinaryCsp(1, 1)
    tuples = [sorted(allowed) for _, allowed in cons]
    size = max(len(t) for t in tuples)
    relations: dict[int, Relation] = {}
    by_matrix: dict[bytes, int] = {}
    constraints: dict[tuple[int, int], int] = {}
    for i, j in itertools.combinations(range(len(cons)), 2):
        si, sj = cons[i][0], cons[j][0]
        shared = [(si.index(v), sj.index(v)) for v in si if v in sj]
        padded = len(tuples[i]) < size or len(tuples[j]) < size
        if not shared and not padded:
            continue
        m = np.zeros((size, size), dtype=bool)
        for a, ta in enumerate(tuples[i]):
            for b, tb in enumerate(tuples[j]):
                m[a, b] = all(ta[p] == tb[q] for p, q in shared)
        key = m.tobytes()
        if key not in by_matrix:
            rid = len(relations)
            by_matrix[key] = rid
            relations[rid] = Relation(rid, Digraph.from_matrix(m))
        constraints[(i, j)] = by_matrix[key]
    return BinaryCsp(len(cons), size, relations, constraints)


# -- text format ---------------------------------------------------------------

def serialize_csp(csp: BinaryCsp, comments: tuple[str, ...] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p csp {csp.n} {csp.k}")
    for rid in sorted(csp.relations):
        pairs = sorted(csp.relations[rid].graph.arcs)
        lines.append(f"r {rid} {len(pairs)}")
        lines += [f"t {u} {w}" for u, w in pairs]
    for (x, y) in sorted(csp.constraints):
        lines.append(f"e {x} {y} {csp.constraints[(x, y)]}")
    return "\n".join(lines) + "\n"


def parse_csp(text: str) -> BinaryCsp:
    n = k = None
    rel_pairs: dict[int, list[tuple[int, int]]] = {}
    expected: dict[int, int] = {}
    current = None
    edges: dict[tuple[int, int], int] = {}

    def ints(tok, lineno):
        try:
            return [int(t) for t in tok]
        except ValueError:
            raise FormatError(f"line {lineno}: expected integers") from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        head = tok[0]
        if head == "p":
            if n is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(tok) != 4 or tok[1] != "csp":
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            n, k = ints(tok[2:], lineno)
            if n < 1 or k < 1:
                raise FormatError(f"line {lineno}: need N >= 1 and K >= 1")
            continue
        if n is None:
            raise FormatError(f"line {lineno}: data before header")
        if current is not None and head != "t":
            if len(rel_pairs[current]) != expected[current]:
                raise FormatError(f"relation {current}: declared {expected[current]} tuples, "
                                  f"found {len(rel_pairs[current])}")
            current = None
        if head == "r" and len(tok) == 3:
            rid, count = ints(tok[1:], lineno)
            if rid in rel_pairs:
                raise FormatError(f"line {lineno}: relation {rid} declared twice")
            rel_pairs[rid], expected[rid] = [], count
            current = rid if count > 0 else None
        elif head == "t" and len(tok) == 3:
            if current is None:
                raise FormatError(f"line {lineno}: tuple outside a relation block")
            u, w = ints(tok[1:], lineno)
            if not (0 <= u < k and 0 <= w < k):
                raise FormatError(f"line {lineno}: value out of domain [0, {k})")
            if (u, w) in rel_pairs[current]:
                raise FormatError(f"line {lineno}: duplicate tuple ({u}, {w})")
            rel_pairs[current].append((u, w))
            if len(rel_pairs[current]) > expected[current]:
                raise FormatError(f"line {lineno}: too many tuples for relation {current}")
        elif head == "e" and len(tok) == 4:
            x, y, rid = ints(tok[1:], lineno)
            if not (0 <= x < y < n):
                raise FormatError(f"line {lineno}: constraint needs 0 <= x < y < {n}")
            if (x, y) in edges:
                raise FormatError(f"line {lineno}: duplicate constraint ({x}, {y})")
            edges[(x, y)] = rid
        else:
            raise FormatError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise FormatError("missing header")
    if current is not None and len(rel_pairs[current]) != expected[current]:
        raise FormatError(f"relation {current}: declared {expected[current]} tuples, "
                          f"found {len(rel_pairs[current])}")
    for (x, y), rid in edges.items():
        if rid not in rel_pairs:
            raise FormatError(f"constraint ({x}, {y}) uses undeclared relation {rid}")
    relations = {rid: Relation(rid, Digraph(k, pairs)) for rid, pairs in rel_pairs.items()}
    return BinaryCsp(n, k, relations, edges)
