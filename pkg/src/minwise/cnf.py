"""CNF assembly: a variable pool, a clause store and the gadgets the encoder needs.

Literals are DIMACS-style non-zero ints.  The Python bools ``True``/``False``
may be used as constant literals; clauses are folded before they are stored
(satisfied clauses are dropped, false constants removed).
"""

from __future__ import annotations

from typing import Iterable, Sequence

Lit = int | bool


def is_const(lit) -> bool:
    return isinstance(lit, bool)


def neg(lit: Lit) -> Lit:
    return (not lit) if is_const(lit) else -lit


class CnfFormula:
    def __init__(self):
        self.num_vars = 0
        self.clauses: list[tuple[int, ...]] = []
        self.names: dict[str, int] = {}
        self.trivially_false = False
        self._conj_cache: dict[tuple[int, ...], int] = {}

    def new_var(self, name: str | None = None) -> int:
        if name is not None and name in self.names:
            raise ValueError(f"variable name {name!r} already used")
        self.num_vars += 1
        if name is not None:
            self.names[name] = self.num_vars
        return self.num_vars

    def add_clause(self, lits: Iterable[Lit]) -> None:
        out = []
        for lit in lits:
            if is_const(lit):
                if lit:
                    return
                continue
            if not 0 < abs(lit) <= self.num_vars:
                raise ValueError(f"literal {lit} refers to an unallocated variable")
            out.append(lit)
        if not out:
            self.trivially_false = True
        self.clauses.append(tuple(out))

    def extend(self, clauses: Iterable[Iterable[Lit]]) -> None:
        for c in clauses:
            self.add_clause(c)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def define_conjunction(f: CnfFormula, lits: Sequence[Lit]) -> Lit:
    """Return a literal that is forced true whenever all of ``lits`` are true.

    Only the implication (l1 & ... & lm) -> a is emitted, which is all an
    upper bound on a sum of such literals needs.  Identical conjunctions share
    one auxiliary variable.
    """
    if not lits:
        raise ValueError("conjunction of no literals")
    if any(is_const(l) and not l for l in lits):
        return False
    rest = tuple(sorted({l for l in lits if not is_const(l)}))
    if not rest:
        return True
    if len(rest) == 1:
        return rest[0]
    if any(-l in rest for l in rest):
        return False
    a = f._conj_cache.get(rest)
    if a is None:
        a = f.new_var()
        f._conj_cache[rest] = a
        f.add_clause([-l for l in rest] + [a])
    return a


def at_most(f: CnfFormula, lits: Sequence[Lit], bound: int) -> None:
    """Sequential counter: at most ``bound`` of ``lits`` are true.

    Register s[i][j] (j < bound) means at least j+1 of the first i+1 literals
    are true; a literal arriving on a full register is refused.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    xs = []
    for l in lits:
        if is_const(l):
            if l:
                bound -= 1
            continue
        xs.append(l)
    if bound < 0:
        f.add_clause([])
        return
    if bound >= len(xs):
        return
    if bound == 0:
        for x in xs:
            f.add_clause([-x])
        return
    m = len(xs)
    s = [[f.new_var() for _ in range(bound)] for _ in range(m - 1)]
    f.add_clause([-xs[0], s[0][0]])
    for j in range(1, bound):
        f.add_clause([-s[0][j]])
    for i in range(1, m - 1):
        f.add_clause([-xs[i], s[i][0]])
        f.add_clause([-s[i - 1][0], s[i][0]])
        for j in range(1, bound):
            f.add_clause([-xs[i], -s[i - 1][j - 1], s[i][j]])
            f.add_clause([-s[i - 1][j], s[i][j]])
        f.add_clause([-xs[i], -s[i - 1][bound - 1]])
    f.add_clause([-xs[m - 1], -s[m - 2][bound - 1]])


def lex_leq(f: CnfFormula, a: Sequence[Lit], b: Sequence[Lit]) -> None:
    """Constrain a <= b lexicographically (0 < 1), via prefix-equality variables.

    Fresh x_i stands for "a and b agree on positions 1..i".  Beyond the AND
    chain this emits the position-1 clause (-a1 | b1), without which a
    leading 1 in a against 0 in b would go unchecked.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    r = len(a)
    if r == 0:
        return
    f.add_clause([neg(a[0]), b[0]])
    if r == 1:
        return
    x = [f.new_var() for _ in range(r - 1)]
    a1, b1 = a[0], b[0]
    f.add_clause([-x[0], b1, neg(a1)])
    f.add_clause([-x[0], a1, neg(b1)])
    f.add_clause([x[0], neg(a1), neg(b1)])
    f.add_clause([x[0], a1, b1])
    for i in range(r - 2):
        ai, bi = a[i + 1], b[i + 1]
        f.add_clause([x[i], -x[i + 1]])
        f.add_clause([-x[i + 1], bi, neg(ai)])
        f.add_clause([-x[i + 1], ai, neg(bi)])
        f.add_clause([x[i + 1], neg(bi), neg(ai), -x[i]])
        f.add_clause([x[i + 1], bi, ai, -x[i]])
    for i in range(r - 1):
        f.add_clause([-x[i], b[i + 1], neg(a[i + 1])])
