"""
Microstructures and their tensor decomposition
==============================================

A binary CSP becomes a graph once every (variable, value) pair is a node.
Two nodes are joined when the pair of assignments is allowed. A solution is
then a clique with one node per variable.
"""

# %%
# A triangle of "not equal" constraints over two colors is the smallest
# unsatisfiable instance worth looking at.
from tensorsat import (
    Digraph,
    complement,
    constraint_graph,
    gen_neq_csp,
    microstructure,
    microstructure_via_tensors,
    tensor_product,
)
from tensorsat.csp import neq_relation

csp = gen_neq_csp(3, 1.0, 2, seed=0)
print(csp.n, "variables,", csp.k, "values,", len(csp.constraints), "constraints")

# %%
# Node ``x*k + v`` stands for "variable x takes value v".
mu = microstructure(csp)
print("microstructure:", mu.node_count, "nodes,", mu.arc_count // 2, "edges")
print(sorted((u, v) for u, v in mu.arcs if u < v))

# %%
# The tensor product pairs up arcs of both factors. K2 x K2 is two disjoint edges.
k2 = Digraph(2, [(0, 1), (1, 0)])
print(sorted(tensor_product(k2, k2).arcs))

# %%
# The same microstructure is rebuilt as a union of tensor terms: one per
# relation, plus the complement of the constraint graph times the complete
# relation for unconstrained pairs.
rebuilt = microstructure_via_tensors(csp)
print("identical:", rebuilt == mu)

# %%
# Pieces of that union, for reference.
g = constraint_graph(csp)
print("constraint graph edges:", g.arc_count // 2)
print("complement edges:", complement(g).arc_count // 2)
print("relation arcs:", sorted(neq_relation(2).graph.arcs))
