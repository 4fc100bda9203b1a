"""Families of permutations: exact independence checks and constructions.

A family is an ordered list of permutation tuples (duplicates allowed), drawn
uniformly.  All counts are integers and probabilities are Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .bounds import lcm_upto
from .patterns import enumerate_sop, enumerate_subperms
from .perm import Perm, check_perm, compose, inverse, reversal, zcat_of

Family = list[Perm]


@dataclass(frozen=True)
class Witness:
    """A failing constraint: ``pattern`` is None for a divisibility failure."""

    pattern: tuple[int, ...] | None
    observed: int
    required: int | None
    divisor: int | None = None

    def describe(self) -> str:
        if self.pattern is None:
            return f"family size {self.observed} is not a multiple of {self.divisor}"
        return f"pattern {self.pattern}: {self.observed} members, need {self.required}"


@dataclass(frozen=True)
class VerificationReport:
    property: str
    k: int
    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        head = f"{self.k}-{self.property} independent: {'yes' if self.holds else 'no'}"
        return head if self.holds else f"{head} ({self.witness.describe()})"


def as_family(members: Iterable[Sequence[int]]) -> Family:
    fam = [check_perm(p) for p in members]
    if not fam:
        raise ValueError("a family needs at least one member")
    n = len(fam[0])
    if any(len(p) != n for p in fam):
        raise ValueError("family members act on different ground sets")
    return fam


def _values(f: Sequence[Perm]) -> np.ndarray:
    # column s-1 holds pi(s) for every member
    return np.asarray(f, dtype=np.int64)


def verify_minwise(f: Sequence[Perm], k: int) -> VerificationReport:
    """Check that for every j <= k and every semiordered pattern s of length j
    exactly d/j members send s1 below all of s2..sj."""
    f = as_family(f)
    n, d = len(f[0]), len(f)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    div = lcm_upto(k)
    if d % div:
        return VerificationReport("minwise", k, False, Witness(None, d, None, div))
    vals = _values(f)
    for j in range(1, k + 1):
        need = d // j
        for s in enumerate_sop(n, j):
            first = vals[:, s[0] - 1]
            if j == 1:
                hits = d
            else:
                hits = int((first < vals[:, [v - 1 for v in s[1:]]].min(axis=1)).sum())
            if hits != need:
                return VerificationReport("minwise", k, False, Witness(s, hits, need))
    return VerificationReport("minwise", k, True)


def verify_rankwise(f: Sequence[Perm], k: int) -> VerificationReport:
    """Check that every k-subpermutation's relative order is realised by d/k! members."""
    f = as_family(f)
    n, d = len(f[0]), len(f)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    div = math.factorial(k)
    if d % div:
        return VerificationReport("rankwise", k, False, Witness(None, d, None, div))
    vals = _values(f)
    need = d // div
    for sigma in enumerate_subperms(n, k):
        cols = vals[:, [v - 1 for v in sigma]]
        hits = int((np.diff(cols, axis=1) > 0).all(axis=1).sum())
        if hits != need:
            return VerificationReport("rankwise", k, False, Witness(sigma, hits, need))
    return VerificationReport("rankwise", k, True)


def min_collision_prob(f: Sequence[Perm], a: Iterable[int], b: Iterable[int]) -> Fraction:
    """Fraction of members whose minimum image over A equals that over B."""
    a, b = sorted(set(a)), sorted(set(b))
    if not a or not b:
        raise ValueError("sets must be non-empty")
    vals = _values(as_family(f))
    n = vals.shape[1]
    if not all(1 <= v <= n for v in a + b):
        raise ValueError("set element outside 1..n")
    ma = vals[:, [v - 1 for v in a]].min(axis=1)
    mb = vals[:, [v - 1 for v in b]].min(axis=1)
    return Fraction(int((ma == mb).sum()), len(vals))


def jaccard(a: Iterable[int], b: Iterable[int]) -> Fraction:
    a, b = set(a), set(b)
    return Fraction(len(a & b), len(a | b))


@dataclass(frozen=True)
class PairCheck:
    a: tuple[int, ...]
    b: tuple[int, ...]
    probability: Fraction
    expected: Fraction

    @property
    def ok(self) -> bool:
        return self.probability == self.expected


def minhash_pairs(f: Sequence[Perm], k: int) -> list[PairCheck]:
    """Compare collision probability with Jaccard similarity for every pair of
    non-empty sets whose union has at most k elements."""
    f = as_family(f)
    n = len(f[0])
    subsets = [s for r in range(1, n + 1) for s in combinations(range(1, n + 1), r)]
    out = []
    for a in subsets:
        for b in subsets:
            if len(set(a) | set(b)) <= k:
                out.append(PairCheck(a, b, min_collision_prob(f, a, b), jaccard(a, b)))
    return out


def double(f: Sequence[Perm], k: int | None = None) -> Family:
    """Append the reversed copy sigma o theta of every member (2d members).

    For a k-restricted minwise independent family with odd k >= 3 the result
    is (k+1)-restricted minwise independent.  Only the parity of ``k`` is
    checked here; use :func:`verify_minwise` on the output.
    """
    f = as_family(f)
    if k is not None and (k < 3 or k % 2 == 0):
        raise ValueError("doubling needs an odd k >= 3")
    sigma = reversal(len(f[0]))
    return list(f) + [compose(sigma, p) for p in f]


def restrict(f: Sequence[Perm], n_new: int) -> Family:
    """Drop symbols n_new+1..n from every member and compress the remaining values to ranks."""
    f = as_family(f)
    if n_new < 1:
        raise ValueError("restricted size must be positive")
    if n_new > len(f[0]):
        raise ValueError("cannot restrict to a larger ground set")
    out = []
    for p in f:
        head = p[:n_new]
        ranks = {v: r for r, v in enumerate(sorted(head), start=1)}
        out.append(tuple(ranks[v] for v in head))
    return out


def right_compose(f: Sequence[Perm], rho: Sequence[int]) -> Family:
    return [compose(p, rho) for p in f]


def normalize(f: Sequence[Perm]) -> Family:
    """Compose every member with the inverse of the first one on the right and
    sort by decreasing z_cat string, so the identity leads."""
    f = as_family(f)
    g = right_compose(f, inverse(f[0]))
    return sorted(g, key=zcat_of, reverse=True)


def same_multiset(f: Sequence[Perm], g: Sequence[Perm]) -> bool:
    return sorted(map(tuple, f)) == sorted(map(tuple, g))


def read_family(path) -> Family:
    with open(path, encoding="ascii") as fh:
        return parse_family(fh.read())


def parse_family(text: str) -> Family:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise ValueError("family header must be 'n d'")
    n, d = map(int, rows[0])
    members = rows[1:]
    if len(members) != d:
        raise ValueError(f"header announces {d} members, found {len(members)}")
    fam = as_family(members)
    if len(fam[0]) != n:
        raise ValueError(f"header announces n={n}, members have {len(fam[0])} entries")
    return fam


def format_family(f: Sequence[Perm], comment: str | None = None) -> str:
    f = as_family(f)
    lines = [f"# {c}" for c in comment.splitlines()] if comment else []
    lines.append(f"{len(f[0])} {len(f)}")
    lines.extend(" ".join(map(str, p)) for p in f)
    return "\n".join(lines) + "\n"


def write_family(f: Sequence[Perm], path, comment: str | None = None) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_family(f, comment))
