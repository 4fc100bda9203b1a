"""
Families made of cosets
=======================

Assume the family is a union of cosets of a subgroup G and sweep over all
subgroup orders dividing d.  Left cosets use one subgroup per conjugacy
class, right cosets use every subgroup.
"""

from minwise.sweep import format_table, sweep

report = sweep(n=4, k=4, d=12, modes=("left", "right"), internal=True, time_limit=120)
print(format_table(report))

# %%
# Every satisfiable instance has already been decoded and re-verified.
for row in report.rows:
    for run in row.runs:
        if run.status == "sat" and row.order >= 6:
            print(row.mode, row.order, run.generators, run.family[:3], "...")
