"""
Instance families
=================

Random G(n, p) disequality CSPs, plus two structured families that are
unsatisfiable yet hard for clique-based solvers.
"""

# %%
from tensorsat import clique_union_matrix, gen_clique_union_csp, gen_disjoint_cliques_csp, prove
from tensorsat.generators import format_matrix, gen_gnp
from tensorsat.oracle import solve_exhaustive

# %%
# Seeded G(n, p): the same seed always gives the same graph.
a, b = gen_gnp(30, 0.2, seed=11), gen_gnp(30, 0.2, seed=11)
print("edges:", a.arc_count // 2, "reproducible:", a == b)

# %%
# Each of the n+1 rows lists the n variables of one clique, and any two
# rows share exactly one variable.
print(format_matrix(clique_union_matrix(5)))

# %%
# Colored with n values, the union of those n+1 cliques has no solution once n >= 4.
for n in (3, 4):
    sat, _ = solve_exhaustive(gen_clique_union_csp(n))
    print(f"clique union n={n}: {'SAT' if sat else 'UNSAT'}")

# %%
# c disjoint cliques of size s over k values: each clique alone is already
# unsatisfiable once s > k, and the fast method sees it.
csp = gen_disjoint_cliques_csp(2, 10, 3)
r = prove(csp, "tensor-fast")
print(f"disjoint cliques: n={csp.n} bound={r.bound} proved={r.proved_unsat}")
