"""Index sets of the counting constraints.

Both enumerations have a fixed lexicographic order: the CNF variable
numbering, and therefore the DIMACS bytes, depend on it.
"""

from __future__ import annotations

from itertools import combinations, permutations


def enumerate_sop(n: int, j: int) -> list[tuple[int, ...]]:
    """Semiordered patterns (s1, s2, ..., sj) with s2 < ... < sj and s1 outside the tail.

    Ordered by the sorted tail first, then by s1.  There are C(n, j) * j of them.
    """
    if not 1 <= j <= n:
        raise ValueError(f"pattern length {j} out of range 1..{n}")
    out = []
    for tail in combinations(range(1, n + 1), j - 1):
        rest = set(tail)
        out.extend((s1, *tail) for s1 in range(1, n + 1) if s1 not in rest)
    return out


def enumerate_subperms(n: int, k: int) -> list[tuple[int, ...]]:
    """Injective maps {1..k} -> {1..n} as tuples, in lexicographic order."""
    if not 0 <= k <= n:
        raise ValueError(f"subpermutation length {k} out of range 0..{n}")
    return list(permutations(range(1, n + 1), k))


def is_sop(s, n: int) -> bool:
    s = tuple(s)
    if not s or any(not 1 <= v <= n for v in s):
        return False
    tail = s[1:]
    return all(a < b for a, b in zip(tail, tail[1:])) and s[0] not in tail
