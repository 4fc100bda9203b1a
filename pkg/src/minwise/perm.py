"""Permutations of {1..n} in one-line notation.

A permutation is a plain tuple ``p`` with ``p[i - 1] == pi(i)``.  Interfaces
are 1-based throughout; only array indexing inside this module is 0-based.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

Perm = tuple[int, ...]


def check_perm(p: Sequence[int]) -> Perm:
    """Return ``p`` as a tuple, raising ValueError unless it is a rearrangement of 1..n."""
    p = tuple(int(v) for v in p)
    if not p or sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of 1..{len(p)}: {p}")
    return p


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def reversal(n: int) -> Perm:
    """The order reversing permutation i -> n + 1 - i."""
    return tuple(range(n, 0, -1))


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    """Return ``a o b``, i.e. ``i -> a(b(i))``."""
    if len(a) != len(b):
        raise ValueError(f"size mismatch: {len(a)} vs {len(b)}")
    return tuple(a[v - 1] for v in b)


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p, start=1):
        inv[v - 1] = i
    return tuple(inv)


def incidence(p: Sequence[int]) -> np.ndarray:
    """Boolean n x n matrix with entry (i, j) set iff p(i) < p(j)."""
    a = np.asarray(p)
    return a[:, None] < a[None, :]


def check_incidence(m: np.ndarray) -> None:
    m = np.asarray(m, dtype=bool)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("incidence matrix must be square")
    if m.diagonal().any():
        raise ValueError("incidence matrix is not irreflexive")
    off = ~np.eye(n, dtype=bool)
    if (m & m.T).any() or not (m | m.T)[off].all():
        raise ValueError("incidence matrix is not a tournament (asymmetry/totality)")
    # transitivity: i<j and j<h but not i<h
    mi = m.astype(np.int64)
    if ((mi @ mi > 0) & ~m).any():
        raise ValueError("incidence matrix is not transitive")


def from_incidence(m: np.ndarray) -> Perm:
    """Recover the permutation via p(j) = 1 + (number of i with p(i) < p(j))."""
    m = np.asarray(m, dtype=bool)
    check_incidence(m)
    return tuple(int(v) for v in 1 + m.sum(axis=0))


def perm_matrix(p: Sequence[int]) -> np.ndarray:
    """Boolean n x n matrix with entry (i, c) set iff p(i) = c."""
    n = len(p)
    t = np.zeros((n, n), dtype=bool)
    t[np.arange(n), np.asarray(p) - 1] = True
    return t


def from_perm_matrix(t: np.ndarray) -> Perm:
    t = np.asarray(t, dtype=bool)
    if (t.sum(axis=0) != 1).any() or (t.sum(axis=1) != 1).any():
        raise ValueError("matrix is not a permutation matrix")
    return tuple(int(c) + 1 for c in t.argmax(axis=1))


def zcat_positions(n: int) -> list[tuple[int, int]]:
    """1-based (i, j) cells read by :func:`z_cat`, adjacent diagonal first."""
    return [(i + 1, i + j) for j in range(2, n + 1) for i in range(0, n - j + 1)]


def z_cat(m: np.ndarray) -> str:
    """Concatenate the above-diagonal side diagonals of an incidence matrix.

    >>> z_cat(incidence((4, 1, 3, 2)))
    '010010'
    """
    m = np.asarray(m, dtype=bool)
    return "".join("1" if m[i - 1, j - 1] else "0" for i, j in zcat_positions(m.shape[0]))


def zcat_of(p: Sequence[int]) -> str:
    return z_cat(incidence(p))


def cycle_form(p: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles with their minimum first, ordered by strictly decreasing leaders.

    Fixed points are kept as 1-cycles.
    """
    p = check_perm(p)
    seen = set()
    cycles = []
    for start in range(1, len(p) + 1):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        v = p[start - 1]
        while v != start:
            cycle.append(v)
            seen.add(v)
            v = p[v - 1]
        cycles.append(tuple(cycle))
    # start runs over increasing values, so each cycle already leads with its minimum
    cycles.reverse()
    return cycles


def linearize(cycles: Iterable[Sequence[int]]) -> Perm:
    """Read the cycle entries from left to right as a one-line permutation."""
    return check_perm([v for c in cycles for v in c])


def from_cycles(cycles: Iterable[Sequence[int]], n: int | None = None) -> Perm:
    """Build the permutation whose cycles are ``cycles`` (missing points are fixed)."""
    cycles = [tuple(c) for c in cycles]
    flat = [v for c in cycles for v in c]
    if len(set(flat)) != len(flat):
        raise ValueError("cycles are not disjoint")
    if n is None:
        n = max(flat, default=0)
    if any(v < 1 or v > n for v in flat):
        raise ValueError("cycle entry out of range")
    image = list(range(1, n + 1))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            image[a - 1] = b
    return tuple(image)


def format_perm(p: Sequence[int]) -> str:
    return " ".join(str(v) for v in p)


def parse_perm(text: str) -> Perm:
    return check_perm(text.replace(",", " ").split())
