"""
Checking a small family by hand
===============================

Six permutations of four symbols, tested for minwise independence,
used for MinHash, doubled and cut down.
"""

from minwise import double, minhash_pairs, restrict, verify_minwise, verify_rankwise
from minwise.family import format_family

family = [(2, 3, 1, 4), (1, 4, 2, 3), (4, 1, 2, 3), (2, 3, 4, 1), (2, 1, 4, 3), (4, 3, 2, 1)]

# every 3-element subset sees each of its symbols mapped lowest exactly twice
print(verify_minwise(family, 3).describe())
print(verify_rankwise(family, 3).describe())

# six members cannot do level 4: that needs a multiple of 12
print(verify_minwise(family, 4).describe())

# %%
# MinHash: the chance that two sets share a minimum equals their Jaccard index
for pair in minhash_pairs(family, 3)[:8]:
    print(sorted(pair.a), sorted(pair.b), pair.probability, pair.expected)

# %%
# Appending the reversed copy of each member lifts level 3 to level 4.
twelve = double(family, 3)
print(verify_minwise(twelve, 4).describe())
print(format_family(twelve, comment="doubled"))

# %%
# Dropping symbol 4 keeps the relative order of the rest.
print(restrict(family, 3))
print(verify_minwise(restrict(family, 3), 3).describe())
