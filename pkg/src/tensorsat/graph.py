"""Digraphs backed by sparse boolean adjacency matrices.

Undirected graphs are symmetric digraphs: an edge {u, v} is the arc pair
(u, v), (v, u). Loops are allowed, parallel arcs are not.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Digraph",
    "FormatError",
    "tensor_product",
    "union",
    "complement",
    "underlying_graph",
    "empty_graph",
    "complete_graph",
    "parse_graph",
    "serialize_graph",
]


class FormatError(ValueError):
    """Raised on malformed graph or CSP text."""


def _as_csr(matrix, n: int) -> sp.csr_matrix:
    m = sp.csr_matrix(matrix, shape=(n, n), dtype=bool, copy=True)
    m.eliminate_zeros()
    m.sum_duplicates()
    m.sort_indices()
    return m


def _csr_from_pairs(rows: np.ndarray, cols: np.ndarray, n: int) -> sp.csr_matrix:
    """Canonical CSR (sorted, no duplicates) straight from arc endpoint arrays."""
    key = np.unique(rows.astype(np.int64) * n + cols)
    r, c = np.divmod(key, n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=n), out=indptr[1:])
    return sp.csr_matrix((np.ones(len(key), dtype=bool), c, indptr), shape=(n, n))


def _pairs(adj: sp.csr_matrix) -> tuple[np.ndarray, np.ndarray]:
    rows = np.repeat(np.arange(adj.shape[0], dtype=np.int64), np.diff(adj.indptr))
    return rows, adj.indices.astype(np.int64)


class Digraph:
    """Immutable digraph on nodes ``0 .. node_count-1``.

    Arcs live in a CSR boolean matrix, so ``successors(v)`` costs O(deg).
    Two digraphs compare equal iff they have the same node count and the
    same arc set.
    """

    __slots__ = ("_adj", "_symmetric", "_arcs")

    def __init__(self, node_count: int, arcs: Iterable[tuple[int, int]] = ()):
        if node_count < 0:
            raise ValueError("node_count must be nonnegative")
        if not isinstance(arcs, np.ndarray):
            arcs = list(arcs)
        if len(arcs):
            a = np.asarray(arcs, dtype=np.int64).reshape(-1, 2)
            if a.min() < 0 or a.max() >= node_count:
                raise ValueError("arc endpoint out of range")
            rows, cols = a[:, 0], a[:, 1]
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
        self._set(_csr_from_pairs(rows, cols, node_count))

    def _init(self, matrix) -> None:
        self._set(_as_csr(matrix, matrix.shape[0]))

    def _set(self, adj: sp.csr_matrix, symmetric: bool | None = None) -> None:
        adj.data.setflags(write=False)
        self._adj = adj
        self._symmetric = symmetric
        self._arcs = None

    @classmethod
    def _wrap(cls, adj: sp.csr_matrix, symmetric: bool | None = None) -> "Digraph":
        """Adopt a canonical CSR matrix without copying; symmetry may be known already."""
        g = cls.__new__(cls)
        g._set(adj, symmetric)
        return g

    @classmethod
    def from_matrix(cls, matrix) -> "Digraph":
        """Wrap a square (dense or sparse) adjacency matrix; nonzeros are arcs."""
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError("adjacency matrix must be square")
        g = cls.__new__(cls)
        g._init(matrix)
        return g

    @property
    def node_count(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> sp.csr_matrix:
        """The CSR adjacency matrix (read-only by convention)."""
        return self._adj

    @property
    def arc_count(self) -> int:
        return self._adj.nnz

    @property
    def is_symmetric(self) -> bool:
        if self._symmetric is None:
            t = self._adj.T.tocsr()
            t.sort_indices()
            self._symmetric = (np.array_equal(t.indptr, self._adj.indptr)
                               and np.array_equal(t.indices, self._adj.indices))
        return self._symmetric

    @property
    def arcs(self) -> frozenset[tuple[int, int]]:
        if self._arcs is None:
            coo = self._adj.tocoo()
            self._arcs = frozenset(zip(coo.row.tolist(), coo.col.tolist()))
        return self._arcs

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def successors(self, v: int) -> np.ndarray:
        a = self._adj
        return a.indices[a.indptr[v]:a.indptr[v + 1]]

    def out_degrees(self) -> np.ndarray:
        return np.diff(self._adj.indptr)

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self._adj.indices, minlength=self.node_count)

    def loops(self) -> np.ndarray:
        """Nodes carrying a loop."""
        return np.flatnonzero(self._adj.diagonal())

    @property
    def has_loops(self) -> bool:
        return bool(self._adj.diagonal().any())

    def transpose(self) -> "Digraph":
        return Digraph.from_matrix(self._adj.T)

    def active_nodes(self) -> int:
        """Number of nodes incident to at least one arc."""
        return int(np.count_nonzero((self.out_degrees() + self.in_degrees()) > 0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and (self._adj != other._adj).nnz == 0
        )

    __hash__ = None

    def __repr__(self) -> str:
        kind = "graph" if self.is_symmetric else "digraph"
        return f"Digraph({kind}, nodes={self.node_count}, arcs={self.arc_count})"


def empty_graph(n: int) -> Digraph:
    return Digraph(n)


def complete_graph(n: int, loops: bool = False) -> Digraph:
    """K_n as a symmetric digraph; with ``loops=True`` every node gets a loop too."""
    m = np.ones((n, n), dtype=bool)
    if not loops:
        np.fill_diagonal(m, False)
    return Digraph.from_matrix(m)


def tensor_product(g: Digraph, h: Digraph) -> Digraph:
    """Tensor (Kronecker) product; node ``a_b`` is indexed ``a*|V(h)| + b``."""
    nh = h.node_count
    (gr, gc), (hr, hc) = _pairs(g.adjacency), _pairs(h.adjacency)
    rows = (gr[:, None] * nh + hr[None, :]).ravel()
    cols = (gc[:, None] * nh + hc[None, :]).ravel()
    # a product of symmetric factors is symmetric; otherwise check lazily
    sym = True if g.is_symmetric and h.is_symmetric else None
    return Digraph._wrap(_csr_from_pairs(rows, cols, g.node_count * nh), sym)


def union(g: Digraph, h: Digraph) -> Digraph:
    if g.node_count != h.node_count:
        raise ValueError(
            f"node count mismatch: {g.node_count} != {h.node_count}"
        )
    return Digraph.from_matrix(g.adjacency + h.adjacency)


def complement(g: Digraph) -> Digraph:
    """Complement of a loopless symmetric graph."""
    if g.has_loops:
        raise ValueError("complement is defined only for loopless graphs")
    if not g.is_symmetric:
        raise ValueError("complement is defined only for symmetric graphs")
    n = g.node_count
    m = ~g.adjacency.toarray()
    np.fill_diagonal(m, False)
    return Digraph._wrap(_as_csr(m, n), True)


def underlying_graph(g: Digraph) -> Digraph:
    """Symmetric closure of ``g``; loops are kept."""
    if g.is_symmetric:
        return g
    return Digraph._wrap(_as_csr(g.adjacency + g.adjacency.T, g.node_count), True)


# -- text format -------------------------------------------------------------

def serialize_graph(g: Digraph) -> str:
    """Canonical text form: ``p graph`` for symmetric digraphs, else ``p digraph``."""
    pairs = sorted(g.arcs)
    if g.is_symmetric:
        edges = [(u, v) for u, v in pairs if u <= v]
        lines = [f"p graph {g.node_count} {len(edges)}"]
        lines += [f"e {u} {v}" for u, v in edges]
    else:
        lines = [f"p digraph {g.node_count} {len(pairs)}"]
        lines += [f"a {u} {v}" for u, v in pairs]
    return "\n".join(lines) + "\n"


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {lineno}: expected an integer, got {token!r}") from None


def parse_graph(text: str) -> Digraph:
    kind = None
    n = m = 0
    arcs: set[tuple[int, int]] = set()
    count = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if kind is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(tok) != 4 or tok[1] not in ("graph", "digraph"):
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            kind = tok[1]
            n, m = _int(tok[2], lineno), _int(tok[3], lineno)
            if n < 0 or m < 0:
                raise FormatError(f"line {lineno}: negative size in header")
            continue
        if kind is None:
            raise FormatError(f"line {lineno}: data before header")
        expected = "e" if kind == "graph" else "a"
        if tok[0] != expected or len(tok) != 3:
            raise FormatError(f"line {lineno}: expected '{expected} u v', got {line!r}")
        u, v = _int(tok[1], lineno), _int(tok[2], lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {lineno}: node id out of range [0, {n})")
        new = {(u, v), (v, u)} if kind == "graph" else {(u, v)}
        if new & arcs:
            raise FormatError(f"line {lineno}: duplicate arc ({u}, {v})")
        arcs |= new
        count += 1
    if kind is None:
        raise FormatError("missing header")
    if count != m:
        raise FormatError(f"header declares {m} lines, found {count}")
    return Digraph(n, arcs)
