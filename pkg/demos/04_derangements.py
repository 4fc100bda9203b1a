"""
Fixed points and waste indices
==============================

Rewriting a permutation in canonical cycle form and dropping the brackets
turns fixed points into waste indices, one for one.
"""

from minwise.bijection import fixed_points, format_table, phi, phi_inverse, waste_indices
from minwise.perm import cycle_form

rho = (1, 5, 3, 4, 6, 2, 8, 7, 9)
print("cycles       ", cycle_form(rho))
print("fixed points ", fixed_points(rho))
tau = phi(rho)
print("image        ", tau)
print("waste indices", waste_indices(tau))
print("back again   ", phi_inverse(tau))

# %%
# Counting both statistics over S_7 gives the same table column by column.
print(format_table(7))
