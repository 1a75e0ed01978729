"""Brute-force ground truth for small instances.

Deliberately naive and self-contained: nothing here uses the coloring or
tensor code it is meant to check.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .csp import BinaryCsp, KaryCsp
from .graph import Digraph

__all__ = ["OracleBudget", "BudgetExceeded", "solve_exhaustive", "chromatic_exact"]


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_nodes: int = 12
    max_search_space: int = 2**24
    force: bool = False


def _check(size: int, limit: int, what: str, budget: OracleBudget) -> None:
    if size <= limit:
        return
    if not budget.force:
        raise BudgetExceeded(f"{what} {size} exceeds budget {limit}")
    warnings.warn(f"{what} {size} exceeds budget {limit}; running anyway", stacklevel=3)


def _binary_checks(csp: BinaryCsp):
    """For each variable y, the list of (x, allowed_set) with x < y."""
    checks = [[] for _ in range(csp.n)]
    for (x, y), rid in csp.constraints.items():
        allowed = csp.relations[rid].graph.arcs
        checks[y].append((x, lambda a, b, s=allowed: (a, b) in s))
    return checks


def _kary_checks(kcsp: KaryCsp):
    """Attach each constraint to the last variable of its scope."""
    checks = [[] for _ in range(kcsp.n)]
    for scope, allowed in kcsp.constraints:
        checks[max(scope)].append((scope, allowed))
    return checks


def solve_exhaustive(csp, budget: OracleBudget = OracleBudget()):
    """Backtracking over all assignments in variable order.

    Returns ``(True, witness)`` or ``(False, None)``. Accepts a
    ``BinaryCsp`` or a ``KaryCsp``.
    """
    n, k = csp.n, csp.k
    _check(k ** n, budget.max_search_space, "search space", budget)
    binary = isinstance(csp, BinaryCsp)
    checks = _binary_checks(csp) if binary else _kary_checks(csp)
    assignment = [0] * n

    def consistent(y):
        if binary:
            return all(ok(assignment[x], assignment[y]) for x, ok in checks[y])
        return all(tuple(assignment[v] for v in scope) in allowed
                   for scope, allowed in checks[y])

    def extend(y):
        if y == n:
            return True
        for v in range(k):
            assignment[y] = v
            if consistent(y) and extend(y + 1):
                return True
        return False

    if extend(0):
        return True, tuple(assignment)
    return False, None


def chromatic_exact(g: Digraph, budget: OracleBudget = OracleBudget()) -> int:
    """Exact chromatic number of the underlying graph by branch and bound.

    Nodes are colored in a fixed high-degree-first order; each node tries
    every color already open plus one new color, and a branch is cut once
    it cannot beat the best coloring found so far.
    """
    n = g.node_count
    _check(n, budget.max_nodes, "node count", budget)
    adj = [set() for _ in range(n)]
    for u, v in g.arcs:
        if u == v:
            raise ValueError(f"node {u} has a loop")
        adj[u].add(v)
        adj[v].add(u)
    if n == 0:
        return 0
    if all(not a for a in adj):
        return 1

    # greedy clique as lower bound
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    clique: list[int] = []
    for v in order:
        if all(v in adj[c] for c in clique):
            clique.append(v)
    lower = len(clique)
    # clique first so the first branch already uses `lower` colors
    order = clique + [v for v in order if v not in set(clique)]

    best = n
    color = [-1] * n

    def search(i, used):
        nonlocal best
        if used >= best:
            return
        if i == n:
            best = used
            return
        v = order[i]
        taken = {color[u] for u in adj[v]}
        for c in range(used):
            if c not in taken:
                color[v] = c
                search(i + 1, used)
                if best == lower:
                    return
        if used + 1 < best:
            color[v] = used
            search(i + 1, used + 1)
        color[v] = -1

    search(0, 0)
    return best
