"""
Three ways to prove a CSP unsatisfiable
=======================================

If the microstructure can be colored with fewer than n colors, no n-clique
exists and the instance has no solution. The methods differ in what they color.
"""

# %%
from tensorsat import ColoringConfig, InapplicableMethod, gen_neq_csp, prove
from tensorsat.csp import BinaryCsp, identity_relation
from tensorsat.oracle import solve_exhaustive

cfg = ColoringConfig(random_orders=5, seed=0)

# %%
# ``mu`` greedily colors the whole microstructure.
# ``tensor`` colors each relation's term separately and multiplies.
# ``tensor-fast`` skips coloring the terms and uses cheap closed-form factors.
csp = gen_neq_csp(40, 0.9, 3, seed=7)
for method in ("mu", "tensor", "tensor-fast"):
    r = prove(csp, method, cfg)
    print(f"{method:12s} bound={r.bound:3d} n={r.n} proved={r.proved_unsat} "
          f"ms={r.elapsed * 1000:.2f} factors={r.factors}")

# %%
# Every bound is an upper bound, so a "proved" verdict is never wrong.
small = gen_neq_csp(7, 0.8, 2, seed=3)
sat, witness = solve_exhaustive(small)
print("exhaustive search says satisfiable:", sat, witness)
print("mu proved:", prove(small, "mu", cfg).proved_unsat)

# %%
# The fast method needs loopless relations. Equality has loops, so it refuses,
# and ``auto`` falls back to the tensor method.
eq = BinaryCsp(3, 2, {0: identity_relation(2)}, {(0, 1): 0, (1, 2): 0})
try:
    prove(eq, "tensor-fast", cfg)
except InapplicableMethod as exc:
    print("tensor-fast:", exc)
print("auto used:", prove(eq, "auto", cfg).method)
