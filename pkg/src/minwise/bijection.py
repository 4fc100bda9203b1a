"""An explicit bijection from k-partial derangements onto permutations with k waste indices.

``fixed_to_waste`` writes a permutation in canonical cycle form (minimum
first in each cycle, leaders decreasing) and reads the entries off as a
one-line permutation.  ``waste_to_fixed`` cuts the one-line form at its
left-to-right minima and reads the blocks back as cycles.  ``phi`` and
``phi_inverse`` are the same two maps under their short names.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from .perm import Perm, check_perm, cycle_form, from_cycles, linearize

MAX_EXHAUSTIVE_N = 9


def waste_indices(p: Sequence[int]) -> list[int]:
    """Positions j (1-based) where p(j) is a prefix minimum and p(j) > p(j+1),
    plus j = n when p(n) = 1."""
    p = check_perm(p)
    n = len(p)
    out = []
    running = n + 1
    for j, v in enumerate(p, start=1):
        running = min(running, v)
        if j < n:
            if v == running and v > p[j]:
                out.append(j)
        elif v == running == 1:
            out.append(j)
    return out


def fixed_points(p: Sequence[int]) -> list[int]:
    return [i for i, v in enumerate(p, start=1) if i == v]


def left_to_right_minima(p: Sequence[int]) -> list[int]:
    out, running = [], len(p) + 1
    for j, v in enumerate(p, start=1):
        if v < running:
            out.append(j)
            running = v
    return out


def fixed_to_waste(p: Sequence[int]) -> Perm:
    return linearize(cycle_form(p))


def waste_to_fixed(t: Sequence[int]) -> Perm:
    t = check_perm(t)
    cuts = left_to_right_minima(t) + [len(t) + 1]
    blocks = [t[a - 1 : b - 1] for a, b in zip(cuts, cuts[1:])]
    return from_cycles(blocks, len(t))


phi = fixed_to_waste
phi_inverse = waste_to_fixed


def count_by_class(n: int) -> dict[int, tuple[int, int]]:
    """Map k to (#permutations with k fixed points, #permutations with k waste indices).

    Streams over all of S_n, so n is capped at 9.
    """
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive counting supports 1 <= n <= {MAX_EXHAUSTIVE_N}")
    fixed = [0] * (n + 1)
    waste = [0] * (n + 1)
    for p in permutations(range(1, n + 1)):
        fixed[len(fixed_points(p))] += 1
        waste[len(waste_indices(p))] += 1
    return {k: (fixed[k], waste[k]) for k in range(n + 1)}


def format_table(n: int) -> str:
    table = count_by_class(n)
    rows = [f"{'k':>3} {'fixed pts':>12} {'waste idx':>12}"]
    rows += [f"{k:>3} {dk:>12} {wk:>12}" for k, (dk, wk) in table.items()]
    return "\n".join(rows)
