"""Subgroups of S_n of a given order, and their conjugacy classes.

Enumeration is brute force over a multiplication table of S_n, so it is
limited to n <= 7.  Subgroups of order dividing q are grown layer by layer:
each known class representative H is extended by one element g outside H
(one g per coset gH suffices, since <H, g> = <H, gh>), keeping the closure
only if its order divides q.  Every new subgroup's conjugation orbit is
expanded at once, so only one representative per class is ever extended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .perm import Perm, check_perm, compose, format_perm, identity, inverse, parse_perm

MAX_ENUM_N = 7


@dataclass(frozen=True)
class Subgroup:
    n: int
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...] = field(compare=False, default=())

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return tuple(p) in set(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def conjugate(self, psi: Sequence[int]) -> "Subgroup":
        """psi G psi^-1."""
        psi_inv = inverse(psi)
        gens = tuple(compose(compose(psi, g), psi_inv) for g in self.generators)
        elems = tuple(sorted(compose(compose(psi, g), psi_inv) for g in self.elements))
        return Subgroup(self.n, elems, gens)

    def describe(self) -> str:
        return "; ".join(format_perm(g) for g in self.generators) or format_perm(identity(self.n))


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Subgroup
    members: tuple[Subgroup, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def closure(gens: Iterable[Sequence[int]], n: int | None = None) -> Subgroup:
    """Smallest subgroup containing ``gens``; elements sorted lexicographically."""
    gens = [check_perm(g) for g in gens]
    if not gens:
        if n is None:
            raise ValueError("n is required for an empty generator list")
        e = identity(n)
        return Subgroup(n, (e,), ())
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators act on different ground sets")
    elems = _closure_tuples(gens, n)
    return Subgroup(n, tuple(sorted(elems)), _greedy_generators(sorted(elems)))


def _closure_tuples(gens: Sequence[Perm], n: int) -> set[Perm]:
    e = identity(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _greedy_generators(sorted_elems: Sequence[Perm]) -> tuple[Perm, ...]:
    """Scan elements in order, keeping each one not yet generated."""
    n = len(sorted_elems[0])
    gens: list[Perm] = []
    span = {identity(n)}
    for x in sorted_elems:
        if x not in span:
            gens.append(x)
            span = _closure_tuples(gens, n)
            if len(span) == len(sorted_elems):
                break
    return tuple(gens)


class _SymmetricTable:
    """S_n elements in lexicographic order with multiplication and inverse tables."""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_ENUM_N:
            raise ValueError(f"subgroup enumeration supports 1 <= n <= {MAX_ENUM_N}")
        self.n = n
        self.elems = list(permutations(range(1, n + 1)))
        size = len(self.elems)
        e0 = np.asarray(self.elems, dtype=np.int64) - 1
        self.mul = np.empty((size, size), dtype=np.int32)
        chunk = max(1, 400_000 // size)
        for a in range(0, size, chunk):
            # prod[x, b, i] = elems[a + x](elems[b](i)), 0-based
            prod = e0[a : a + chunk][:, e0]
            self.mul[a : a + chunk] = _lex_rank(prod.reshape(-1, n)).reshape(-1, size)
        # identity has rank 0, so the inverse of a sits where row a of mul is 0
        self.inv = np.argmin(self.mul, axis=1).astype(np.int32)
        # generators of S_n for conjugation orbits: a transposition and an n-cycle
        self.sn_gens = []
        if n >= 2:
            t = list(range(1, n + 1))
            t[0], t[1] = 2, 1
            c = list(range(2, n + 1)) + [1]
            self.sn_gens = [self.index(tuple(t)), self.index(tuple(c))]

    def index(self, p: Perm) -> int:
        return int(_lex_rank(np.asarray([p], dtype=np.int64) - 1)[0])

    def closure(self, base: frozenset[int], gens: Sequence[int], limit: int) -> frozenset[int] | None:
        """<base, gens> as an index set, or None once it grows beyond ``limit``."""
        seen = set(base)
        frontier = list(base)
        mul = self.mul
        while frontier:
            nxt = []
            for x in frontier:
                row = mul[x]
                for g in gens:
                    y = int(row[g])
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > limit:
                            return None
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def conjugate(self, h: frozenset[int], psi: int) -> frozenset[int]:
        mul = self.mul
        pinv = int(self.inv[psi])
        return frozenset(int(mul[mul[psi, x], pinv]) for x in h)

    def orbit(self, h: frozenset[int]) -> list[frozenset[int]]:
        seen = {h}
        out = [h]
        frontier = [h]
        while frontier:
            nxt = []
            for k in frontier:
                for psi in self.sn_gens:
                    c = self.conjugate(k, psi)
                    if c not in seen:
                        seen.add(c)
                        out.append(c)
                        nxt.append(c)
            frontier = nxt
        return out

    def to_subgroup(self, h: Iterable[int]) -> Subgroup:
        elems = tuple(sorted(self.elems[i] for i in h))
        return Subgroup(self.n, elems, _greedy_generators(elems))


def _lex_rank(rows: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each 0-based permutation row (Lehmer code)."""
    n = rows.shape[1]
    less = rows[:, None, :] < rows[:, :, None]  # less[r, i, j]: rows[r, j] < rows[r, i]
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    code = (less & upper).sum(axis=2)
    weights = np.array([math.factorial(n - 1 - i) for i in range(n)], dtype=np.int64)
    return code @ weights


@lru_cache(maxsize=None)
def _table(n: int) -> _SymmetricTable:
    return _SymmetricTable(n)


@lru_cache(maxsize=None)
def _orbits_dividing(n: int, q: int) -> dict[int, list[list[frozenset[int]]]]:
    """Conjugation orbits of all subgroups whose order divides q, keyed by order."""
    tab = _table(n)
    e = frozenset({0})
    known: set[frozenset[int]] = {e}
    by_order: dict[int, list[list[frozenset[int]]]] = {1: [[e]]}
    layer = [e]
    while layer:
        nxt = []
        for h in layer:
            if len(h) == q:
                continue
            gens = _table_gens(tab, h)
            covered: set[int] = set(h)
            for g in range(len(tab.elems)):
                if g in covered:
                    continue
                covered.update(int(tab.mul[g, x]) for x in h)
                k = tab.closure(h, gens + [g], q)
                if k is None or q % len(k) or k in known:
                    continue
                orbit = tab.orbit(k)
                known.update(orbit)
                by_order.setdefault(len(k), []).append(orbit)
                nxt.append(k)
        layer = nxt
    return by_order


def _table_gens(tab: _SymmetricTable, h: frozenset[int]) -> list[int]:
    gens: list[int] = []
    span = frozenset({0})
    for x in sorted(h):
        if x not in span:
            gens.append(x)
            span = tab.closure(span, gens, len(h))
    return gens


def subgroups_of_order(n: int, q: int) -> list[Subgroup]:
    """All subgroups of S_n of order q, sorted by their element lists."""
    if q < 1 or math.factorial(n) % q:
        raise ValueError(f"{q} does not divide {n}!")
    tab = _table(n)
    orbits = _orbits_dividing(n, q).get(q, [])
    subs = [tab.to_subgroup(h) for orbit in orbits for h in orbit]
    return sorted(subs, key=lambda s: s.elements)


def conjugacy_classes(subs: Sequence[Subgroup], n: int) -> list[ConjugacyClass]:
    """Partition ``subs`` into conjugacy classes under S_n.

    Representatives are the key-minimal members; classes are listed in order
    of their representatives.
    """
    if any(s.n != n for s in subs):
        raise ValueError("subgroups act on different ground sets")
    if not subs:
        return []
    tab = _table(n)
    class_of: dict[frozenset[int], int] = {}
    groups: dict[int, list[Subgroup]] = {}
    next_id = 0
    for s in subs:
        key = frozenset(tab.index(p) for p in s.elements)
        cid = class_of.get(key)
        if cid is None:
            cid = next_id
            next_id += 1
            for c in tab.orbit(key):
                class_of[c] = cid
        groups.setdefault(cid, []).append(s)
    classes = []
    for members in groups.values():
        members = sorted(members, key=lambda s: s.elements)
        classes.append(ConjugacyClass(members[0], tuple(members)))
    return sorted(classes, key=lambda c: c.representative.elements)


def class_representatives(n: int, q: int) -> list[Subgroup]:
    return [c.representative for c in conjugacy_classes(subgroups_of_order(n, q), n)]


def is_subgroup(elements: Iterable[Sequence[int]]) -> bool:
    elems = {tuple(p) for p in elements}
    if not elems:
        return False
    n = len(next(iter(elems)))
    if identity(n) not in elems:
        return False
    return all(compose(a, b) in elems for a in elems for b in elems) and all(
        inverse(a) in elems for a in elems
    )


def parse_generator_line(line: str) -> list[Perm]:
    return [parse_perm(chunk) for chunk in line.split(";") if chunk.strip()]


def read_group_file(path) -> list[Subgroup]:
    """One subgroup per line, generators separated by ';'.  Blank and '#' lines are skipped."""
    out = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            out.append(closure(parse_generator_line(line)))
    return out


def write_group_file(subs: Iterable[Subgroup], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for s in subs:
            fh.write(s.describe() + "\n")
