"""Unsatisfiability proofs by coloring the microstructure or its tensor factors.

A CSP on n variables is unsatisfiable whenever its microstructure can be
colored with fewer than n colors. The three methods differ only in how
they obtain an upper bound on that chromatic number:

* ``prove_mu`` colors the whole microstructure.
* ``prove_tensor`` bounds each tensor term separately and multiplies.
* ``prove_tensor_fast`` only colors the complement of the constraint graph
  (all relations must be loopless).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import prod

import numpy as np

from .coloring import best_coloring
from .csp import (
    BinaryCsp,
    complete_relation,
    constraint_graph,
    microstructure,
    oriented_subgraph,
    relation_subgraph,
)
from .graph import complement, tensor_product, underlying_graph

__all__ = [
    "MU",
    "TENSOR",
    "TENSOR_FAST",
    "METHODS",
    "ColoringConfig",
    "ProofReport",
    "InapplicableMethod",
    "prove_mu",
    "relation_factor",
    "prove_tensor",
    "prove_tensor_fast",
    "prove",
]

MU = "mu"
TENSOR = "tensor"
TENSOR_FAST = "tensor-fast"
METHODS = (MU, TENSOR, TENSOR_FAST)


class InapplicableMethod(ValueError):
    """The fast tensor method needs every used relation to be loopless."""


@dataclass(frozen=True)
class ColoringConfig:
    random_orders: int = 5
    seed: int = 0
    workers: int = 1
    # color G(R_i) instead of counting its active nodes for loopless relations
    tight_loopless: bool = False


@dataclass(frozen=True)
class ProofReport:
    method: str
    n: int
    bound: int
    factors: tuple[tuple[str, int], ...]
    elapsed: float
    seed: int

    @property
    def proved_unsat(self) -> bool:
        return self.bound < self.n

    def same_outcome(self, other: "ProofReport") -> bool:
        """Equality ignoring wall-clock time."""
        return (self.method, self.n, self.bound, self.factors, self.seed) == (
            other.method, other.n, other.bound, other.factors, other.seed)


def _colors(g, cfg: ColoringConfig) -> int:
    return best_coloring(underlying_graph(g), cfg.random_orders, cfg.seed).colors_used


def prove_mu(csp: BinaryCsp, cfg: ColoringConfig = ColoringConfig()) -> ProofReport:
    t0 = time.perf_counter()
    bound = _colors(microstructure(csp), cfg)
    return ProofReport(MU, csp.n, bound, (("microstructure", bound),),
                       time.perf_counter() - t0, cfg.seed)


def _active_count(csp: BinaryCsp, rel_id: int) -> int:
    """Variables touched by at least one constraint labelled ``rel_id``."""
    xs, ys, rs = csp.edge_arrays
    sel = rs == rel_id
    return len(np.union1d(xs[sel], ys[sel]))


def relation_factor(csp: BinaryCsp, rel_id: int,
                    cfg: ColoringConfig = ColoringConfig()) -> int:
    """Upper bound on the chromatic number of the tensor term for one relation."""
    if rel_id not in csp.relations:
        raise KeyError(f"unknown relation id {rel_id}")
    rel = csp.relations[rel_id]
    if rel.is_loopless:
        if cfg.tight_loopless:
            return max(1, min(_colors(relation_subgraph(csp, rel_id), cfg), csp.k))
        return max(1, min(_active_count(csp, rel_id), csp.k))
    return _colors(tensor_product(oriented_subgraph(csp, rel_id), rel.graph), cfg)


def _complement_term(csp: BinaryCsp, cfg: ColoringConfig) -> int:
    gc = complement(constraint_graph(csp))
    return _colors(tensor_product(gc, complete_relation(csp.k).graph), cfg)


def prove_tensor(csp: BinaryCsp, cfg: ColoringConfig = ColoringConfig()) -> ProofReport:
    t0 = time.perf_counter()
    rels = csp.used_relations()
    tasks = [(f"relation-{rid}", lambda rid=rid: relation_factor(csp, rid, cfg)) for rid in rels]
    tasks.append(("complement-x-complete", lambda: _complement_term(csp, cfg)))
    if cfg.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            values = list(pool.map(lambda t: t[1](), tasks))
    else:
        values = [fn() for _, fn in tasks]
    factors = tuple((label, v) for (label, _), v in zip(tasks, values))
    return ProofReport(TENSOR, csp.n, prod(values), factors,
                       time.perf_counter() - t0, cfg.seed)


def prove_tensor_fast(csp: BinaryCsp, cfg: ColoringConfig = ColoringConfig()) -> ProofReport:
    t0 = time.perf_counter()
    rels = csp.used_relations()
    looped = [rid for rid in rels if not csp.relations[rid].is_loopless]
    if looped:
        raise InapplicableMethod(f"relations {looped} have loops")
    g = constraint_graph(csp)
    factors = [(f"relation-{rid}", min(_active_count(csp, rid), csp.k)) for rid in rels]
    factors.append(("domain", csp.k))
    factors.append(("complement", _colors(complement(g), cfg)))
    return ProofReport(TENSOR_FAST, csp.n, prod(v for _, v in factors), tuple(factors),
                       time.perf_counter() - t0, cfg.seed)


_DISPATCH = {MU: prove_mu, TENSOR: prove_tensor, TENSOR_FAST: prove_tensor_fast}


def prove(csp: BinaryCsp, method: str, cfg: ColoringConfig = ColoringConfig()) -> ProofReport:
    """Run one method by name; ``"auto"`` is tensor-fast with a fallback to tensor."""
    if method == "auto":
        try:
            return prove_tensor_fast(csp, cfg)
        except InapplicableMethod:
            return prove_tensor(csp, cfg)
    try:
        return _DISPATCH[method](csp, cfg)
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
