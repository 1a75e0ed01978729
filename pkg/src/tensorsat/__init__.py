"""Prove binary CSPs unsatisfiable by coloring their microstructure or its tensor factors."""

from .coloring import Coloring, best_coloring, degree_order, greedy_color
from .csp import (
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
from .generators import (
    GenSpec,
    clique_union_matrix,
    gen_clique_union_csp,
    gen_disjoint_cliques_csp,
    gen_gnp,
    gen_neq_csp,
)
from .graph import (
    Digraph,
    complement,
    parse_graph,
    serialize_graph,
    tensor_product,
    underlying_graph,
    union,
)
from .methods import (
    ColoringConfig,
    InapplicableMethod,
    ProofReport,
    prove,
    prove_mu,
    prove_tensor,
    prove_tensor_fast,
    relation_factor,
)
from .oracle import OracleBudget, chromatic_exact, solve_exhaustive

__version__ = "0.1.0"
