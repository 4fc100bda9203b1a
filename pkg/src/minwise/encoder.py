"""SAT models for k-restricted minwise (or k-rankwise) independent families.

Three modes share one cardinality layer:

``pure``   d members, each an upper-triangular order matrix x[l][i][j] (i < j);
           x[l][j][i] is the negated literal, so asymmetry and totality hold by
           construction and only transitivity clauses are emitted.
``left``   d/|G| offsets theta_l; member (l, m) is theta_l o gamma_m and reads
           its order bits from theta_l at positions permuted by gamma_m.
``right``  offsets as permutation matrices t[l][i][c]; member (l, m) is
           gamma_m o theta_l, whose order bits are auxiliary variables linked
           to the rows of t by a pair of lexicographic comparisons.

Variables are numbered members/offsets first ((i, j) or (i, c) row-major),
then derived order bits, then auxiliaries in emission order, so the DIMACS
output of identical configurations is byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .bounds import lcm_upto
from .cnf import CnfFormula, Lit, at_most, define_conjunction, lex_leq
from .groups import Subgroup, closure, parse_generator_line
from .patterns import enumerate_sop, enumerate_subperms
from .perm import Perm, format_perm, inverse, zcat_positions

# minimum number of comparisons that sort n elements, n = 1..15
SORTING_COMPARISONS = (0, 1, 3, 5, 7, 10, 13, 16, 19, 22, 26, 30, 34, 38, 42)

MODES = ("pure", "left", "right")


def default_accuracy(n: int) -> int:
    if n <= len(SORTING_COMPARISONS):
        return SORTING_COMPARISONS[n - 1]
    # information-theoretic lower bound beyond the tabulated range
    return min(n * (n - 1) // 2, math.ceil(math.log2(math.factorial(n))))


@dataclass
class ModelConfig:
    n: int
    k: int
    d: int
    mode: str = "pure"
    group: Subgroup | None = None
    H: int | None = None
    fix_first: bool = True
    rankwise: bool = False
    permute_rows: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k={self.k} out of range 1..{self.n}")
        if self.d < 1:
            raise ValueError("d must be positive")
        div = math.factorial(self.k) if self.rankwise else lcm_upto(self.k)
        if self.d % div:
            raise ValueError(f"d={self.d} is not a multiple of {div}")
        if self.mode == "pure":
            if self.group is not None and self.group.order != 1:
                raise ValueError("pure mode takes no group")
        else:
            if self.group is None:
                self.group = closure([], self.n)
            if self.group.n != self.n:
                raise ValueError("group acts on a different ground set")
            if self.d % self.group.order:
                raise ValueError(f"|G|={self.group.order} does not divide d={self.d}")
        full = self.n * (self.n - 1) // 2
        if self.H is None:
            self.H = min(default_accuracy(self.n), full)
        if not 0 <= self.H <= full:
            raise ValueError(f"H={self.H} out of range 0..{full}")

    @property
    def q(self) -> int:
        return 1 if self.group is None else self.group.order

    @property
    def offsets(self) -> int:
        return self.d // self.q


@dataclass
class DecodeMap:
    """Variable ids of the decision (and derived) variables of one model.

    ``x[(member, i, j)]`` with i < j holds the order bit pi(i) < pi(j); in
    left mode ``member`` is an offset index, in right mode it is the family
    position (l - 1) * |G| + m.  ``t[(offset, i, c)]`` holds theta(i) = c.
    """

    cfg: ModelConfig
    x: dict[tuple[int, int, int], int] = field(default_factory=dict)
    t: dict[tuple[int, int, int], int] = field(default_factory=dict)


def build(cfg: ModelConfig) -> tuple[CnfFormula, DecodeMap]:
    if cfg.mode == "pure":
        return build_pure(cfg)
    if cfg.mode == "left":
        return build_left(cfg, cfg.group)
    return build_right(cfg, cfg.group)


def _order_block(f: CnfFormula, dm: DecodeMap, member: int, n: int, prefix: str = "x") -> Callable[[int, int], Lit]:
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            dm.x[(member, i, j)] = f.new_var(f"{prefix}[{member}][{i}][{j}]")
    return _reader(dm.x, member)


def _reader(table, member: int) -> Callable[[int, int], Lit]:
    def lit(i: int, j: int) -> Lit:
        if i == j:
            return False
        return table[(member, i, j)] if i < j else -table[(member, j, i)]

    return lit


def _transitivity(f: CnfFormula, lit: Callable[[int, int], Lit], n: int) -> None:
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for h in range(1, n + 1):
                if h != i and h != j:
                    f.add_clause([-lit(i, j), -lit(j, h), lit(i, h)])


def _fix_identity(f: CnfFormula, lit: Callable[[int, int], Lit], n: int) -> None:
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            f.add_clause([lit(i, j)])


def _zcat_lits(lit: Callable[[int, int], Lit], n: int, H: int) -> list[Lit]:
    return [lit(i, j) for i, j in zcat_positions(n)[:H]]


def _lex_chain(f: CnfFormula, lits: Sequence[Callable[[int, int], Lit]], n: int, H: int) -> None:
    """Non-increasing z_cat prefixes along ``lits``."""
    if H == 0:
        return
    for prev, nxt in zip(lits, lits[1:]):
        lex_leq(f, _zcat_lits(nxt, n, H), _zcat_lits(prev, n, H))


def _cardinality(f: CnfFormula, members: Sequence[Callable[[int, int], Lit]], cfg: ModelConfig) -> None:
    n, k, d = cfg.n, cfg.k, cfg.d

    def bound_all(chains, bound):
        at_most(f, [define_conjunction(f, [lit(a, b) for a, b in chains]) for lit in members], bound)

    if cfg.rankwise:
        if k < 2:
            return
        for sigma in enumerate_subperms(n, k):
            bound_all(list(zip(sigma, sigma[1:])), d // math.factorial(k))
        return
    if k == 2:
        for s in enumerate_sop(n, 2):
            at_most(f, [lit(s[0], s[1]) for lit in members], d // 2)
        return
    if k < 3:
        return
    for j in range(4, k + 1):
        for s in enumerate_sop(n, j):
            bound_all([(s[0], sh) for sh in s[1:]], d // j)
    for sigma in enumerate_subperms(n, 3):
        bound_all([(sigma[0], sigma[1]), (sigma[1], sigma[2])], d // 6)


def build_pure(cfg: ModelConfig) -> tuple[CnfFormula, DecodeMap]:
    if cfg.mode != "pure":
        raise ValueError("build_pure needs mode='pure'")
    f, dm = CnfFormula(), DecodeMap(cfg)
    members = [_order_block(f, dm, m, cfg.n) for m in range(1, cfg.d + 1)]
    for lit in members:
        _transitivity(f, lit, cfg.n)
    if cfg.fix_first:
        _fix_identity(f, members[0], cfg.n)
    _cardinality(f, members, cfg)
    _lex_chain(f, members, cfg.n, cfg.H)
    return f, dm


def build_left(cfg: ModelConfig, group: Subgroup | None = None) -> tuple[CnfFormula, DecodeMap]:
    """Family (theta_l o gamma_m): member bit (i, j) is theta_l's bit (gamma_m(i), gamma_m(j))."""
    if group is not None:
        cfg = replace(cfg, group=group)
    if cfg.mode != "left":
        raise ValueError("build_left needs mode='left'")
    f, dm = CnfFormula(), DecodeMap(cfg)
    thetas = [_order_block(f, dm, l, cfg.n) for l in range(1, cfg.offsets + 1)]
    for lit in thetas:
        _transitivity(f, lit, cfg.n)
    members = [_shifted(lit, g) for lit in thetas for g in cfg.group.elements]
    _cardinality(f, members, cfg)
    _lex_chain(f, thetas, cfg.n, cfg.H)
    return f, dm


def _shifted(lit: Callable[[int, int], Lit], g: Perm) -> Callable[[int, int], Lit]:
    return lambda i, j: lit(g[i - 1], g[j - 1])


def build_right(cfg: ModelConfig, group: Subgroup | None = None) -> tuple[CnfFormula, DecodeMap]:
    """Family (gamma_m o theta_l) with offsets as permutation matrices.

    Row i of the matrix of gamma o theta is row i of T^theta with its columns
    reordered by c -> gamma^-1(c).  Bit (i, r) of the member is true iff that
    row i is a lexicographic successor of row r.  With
    ``cfg.permute_rows`` the rows gamma(i), gamma(r) of T^theta are
    compared instead, which describes theta o gamma.
    """
    if group is not None:
        cfg = replace(cfg, group=group)
    if cfg.mode != "right":
        raise ValueError("build_right needs mode='right'")
    n, q = cfg.n, cfg.q
    f, dm = CnfFormula(), DecodeMap(cfg)
    for l in range(1, cfg.offsets + 1):
        for i in range(1, n + 1):
            for c in range(1, n + 1):
                dm.t[(l, i, c)] = f.new_var(f"t[{l}][{i}][{c}]")
    members = []
    for l in range(1, cfg.offsets + 1):
        for m, g in enumerate(cfg.group.elements, start=1):
            members.append(_order_block(f, dm, (l - 1) * q + m, n))
    t = dm.t
    for l in range(1, cfg.offsets + 1):
        for i in range(1, n + 1):
            f.add_clause([t[(l, i, c)] for c in range(1, n + 1)])
            for c in range(1, n + 1):
                for c2 in range(c + 1, n + 1):
                    f.add_clause([-t[(l, i, c)], -t[(l, i, c2)]])
        for c in range(1, n + 1):
            for i in range(1, n + 1):
                for i2 in range(i + 1, n + 1):
                    f.add_clause([-t[(l, i, c)], -t[(l, i2, c)]])
    if cfg.fix_first:
        for i in range(1, n + 1):
            f.add_clause([t[(1, i, i)]])
    for l in range(1, cfg.offsets + 1):
        for m, g in enumerate(cfg.group.elements, start=1):
            lit = members[(l - 1) * q + m - 1]
            g_inv = inverse(g)

            def row(i, l=l, g=g, g_inv=g_inv):
                if cfg.permute_rows:
                    return [t[(l, g[i - 1], c)] for c in range(1, n + 1)]
                return [t[(l, i, g_inv[c - 1])] for c in range(1, n + 1)]

            for i in range(1, n + 1):
                for r in range(i + 1, n + 1):
                    x = lit(i, r)
                    ri, rr = row(i), row(r)
                    lex_leq(f, [x] + rr, [True] + ri)
                    lex_leq(f, [False] + [-v for v in rr], [x] + [-v for v in ri])
    _cardinality(f, members, cfg)
    # gamma_1 is the identity, so these are the offsets' own order bits
    _lex_chain(f, members[::q], n, cfg.H)
    return f, dm


def write_map(dm: DecodeMap, sink) -> None:
    cfg = dm.cfg
    sink.write("c minwise decode map v1\n")
    sink.write(f"mode {cfg.mode}\nn {cfg.n}\nk {cfg.k}\nd {cfg.d}\nH {cfg.H}\n")
    sink.write(f"rankwise {int(cfg.rankwise)}\nfix_first {int(cfg.fix_first)}\n")
    sink.write(f"permute_rows {int(cfg.permute_rows)}\n")
    if cfg.group is not None:
        sink.write("group " + "; ".join(format_perm(g) for g in cfg.group.generators) + "\n")
    for (m, i, j), v in dm.x.items():
        sink.write(f"x {m} {i} {j} {v}\n")
    for (l, i, c), v in dm.t.items():
        sink.write(f"t {l} {i} {c} {v}\n")


def read_map(source) -> DecodeMap:
    header: dict[str, str] = {}
    x, t = {}, {}
    for line in source:
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        key, _, rest = line.partition(" ")
        if key in ("x", "t"):
            a, b, c, v = map(int, rest.split())
            (x if key == "x" else t)[(a, b, c)] = v
        else:
            header[key] = rest
    n = int(header["n"])
    group = None
    if "group" in header:
        group = closure(parse_generator_line(header["group"]), n)
    cfg = ModelConfig(
        n=n,
        k=int(header["k"]),
        d=int(header["d"]),
        mode=header["mode"],
        group=group,
        H=int(header["H"]),
        fix_first=header.get("fix_first", "1") == "1",
        rankwise=header.get("rankwise", "0") == "1",
        permute_rows=header.get("permute_rows", "0") == "1",
    )
    return DecodeMap(cfg, x, t)
