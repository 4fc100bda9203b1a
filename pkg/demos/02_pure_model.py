"""
Searching for a family with SAT
===============================

Build the order-matrix model, look at its size, solve it with the built-in
solver and read the family back.
"""

from minwise import ModelConfig, build, decode, solve_internal, verify_minwise
from minwise.perm import zcat_of

cfg = ModelConfig(n=4, k=4, d=12)
formula, decode_map = build(cfg)
print(f"{formula.num_vars} variables, {formula.num_clauses} clauses, symmetry prefix H={cfg.H}")

result = solve_internal(formula, time_limit=120)
print(result.status, f"{result.elapsed:.2f}s", result.stats)

family = decode(result.model, decode_map)
for p in family:
    print(p, zcat_of(p))
print(verify_minwise(family, 4).describe())

# %%
# Twelve members on six symbols are impossible.  The built-in solver has no
# clause learning, so it gives up here; an external solver (see README) proves it.
big, _ = build(ModelConfig(n=6, k=4, d=12))
print(solve_internal(big, time_limit=5).status)
