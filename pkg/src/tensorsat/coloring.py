"""Greedy sequential coloring under fixed node orderings.

Colors are assigned on the underlying graph of a digraph. Each node takes
the smallest color not used by an already-colored neighbor. Color classes
are kept as Python-int bitsets, so placing a node costs one AND per open
color rather than one lookup per neighbor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Digraph, underlying_graph
from .rng import SeededStream

__all__ = [
    "Coloring",
    "LoopError",
    "adjacency_masks",
    "greedy_color",
    "degree_order",
    "random_orders",
    "best_coloring",
]

_MASK_CHUNK = 1024


class LoopError(ValueError):
    """A node with a loop cannot be properly colored."""


@dataclass(frozen=True)
class Coloring:
    assignment: tuple[int, ...]
    colors_used: int
    order_tag: str = ""

    def is_proper(self, g: Digraph) -> bool:
        a = self.assignment
        return all(a[u] != a[v] for u, v in g.arcs if u != v)


def _check_loopless(g: Digraph) -> None:
    if g.has_loops:
        raise LoopError(f"graph has loops at nodes {g.loops()[:5].tolist()}")


def adjacency_masks(g: Digraph) -> list[int]:
    """Neighbor bitsets of the underlying graph, one Python int per node."""
    u = underlying_graph(g).adjacency
    n = u.shape[0]
    masks: list[int] = []
    for lo in range(0, n, _MASK_CHUNK):
        block = u[lo:lo + _MASK_CHUNK].toarray()
        packed = np.packbits(block, axis=1, bitorder="little")
        masks.extend(int.from_bytes(row.tobytes(), "little") for row in packed)
    return masks


def _greedy(masks: list[int], order) -> tuple[list[int], int]:
    classes: list[int] = []
    assignment = [0] * len(masks)
    for v in order:
        m = masks[v]
        for c, members in enumerate(classes):
            if not m & members:
                classes[c] = members | (1 << v)
                assignment[v] = c
                break
        else:
            assignment[v] = len(classes)
            classes.append(1 << v)
    return assignment, len(classes)


def greedy_color(g: Digraph, order, order_tag: str = "given") -> Coloring:
    order = [int(v) for v in order]
    if sorted(order) != list(range(g.node_count)):
        raise ValueError("order must be a permutation of the nodes")
    _check_loopless(g)
    assignment, used = _greedy(adjacency_masks(g), order)
    return Coloring(tuple(assignment), used, order_tag)


def degree_order(g: Digraph) -> list[int]:
    """Nodes by decreasing degree in the underlying graph, ties by ascending id."""
    deg = underlying_graph(g).out_degrees()
    return np.argsort(-deg, kind="stable").tolist()


def random_orders(n: int, count: int, seed: int) -> list[list[int]]:
    stream = SeededStream(seed)
    return [stream.permutation(n) for _ in range(count)]


def best_coloring(g: Digraph, random_orders_count: int = 5, seed: int = 0) -> Coloring:
    """Fewest-colors greedy coloring over the degree order plus seeded random orders.

    Orders are tried degree-first, then random orders in draw order; the
    earliest order wins ties.
    """
    _check_loopless(g)
    masks = adjacency_masks(g)
    candidates = [("degree", degree_order(g))]
    for i, perm in enumerate(random_orders(g.node_count, random_orders_count, seed)):
        candidates.append((f"random-{i}", perm))
    best = None
    for tag, order in candidates:
        assignment, used = _greedy(masks, order)
        if best is None or used < best.colors_used:
            best = Coloring(tuple(assignment), used, tag)
    return best
