import io
import itertools
import random

import pytest

from conftest import EXTERNAL_CMD, needs_pysat
from helpers import projected_models
from minwise.encoder import ModelConfig, build, build_left, build_pure, build_right, default_accuracy, read_map, write_map
from minwise.family import verify_minwise, verify_rankwise
from minwise.groups import closure, conjugacy_classes, subgroups_of_order
from minwise.patterns import enumerate_sop, enumerate_subperms
from minwise.perm import compose, identity, zcat_of
from minwise.solver import decode, dimacs_text, solve, solve_internal


def holds(fam, k, rankwise=False):
    return (verify_rankwise if rankwise else verify_minwise)(fam, k).holds


def pattern_caps(n, k, d, rankwise):
    if rankwise:
        return [(list(zip(s, s[1:])), d // len(list(itertools.permutations(range(k))))) for s in enumerate_subperms(n, k)]
    return [([(s[0], t) for t in s[1:]], d // j) for j in range(2, k + 1) for s in enumerate_sop(n, j)]


def oracle_pure(n, k, d, H, fix_first, rankwise=False):
    """Ordered d-tuples of S_n meeting the definition, first = id, z_cat prefixes non-increasing."""
    sn = list(itertools.permutations(range(1, n + 1)))
    caps = pattern_caps(n, k, d, rankwise)
    hits = {p: [all(p[a - 1] < p[b - 1] for a, b in chain) for chain, _ in caps] for p in sn}
    z = {p: zcat_of(p)[:H] for p in sn}
    counts = [0] * len(caps)
    out = set()

    def rec(prefix):
        if len(prefix) == d:
            if holds(list(prefix), k, rankwise):
                out.add(tuple(prefix))
            return
        for p in sn:
            if not prefix and fix_first and p != identity(n):
                continue
            if prefix and z[p] > z[prefix[-1]]:
                continue
            if any(h and c >= cap for h, c, (_, cap) in zip(hits[p], counts, caps)):
                continue
            for a, h in enumerate(hits[p]):
                counts[a] += h
            rec(prefix + [p])
            for a, h in enumerate(hits[p]):
                counts[a] -= h

    rec([])
    return out


def x_vars(dm, members):
    n = dm.cfg.n
    return [dm.x[(m, i, j)] for m in members for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def models_as_tuples(f, dm, members):
    n = dm.cfg.n
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    out = set()
    for key in projected_models(f, x_vars(dm, members)):
        fam = []
        for a in range(len(members)):
            bits = dict(zip(pairs, key[a * len(pairs) : (a + 1) * len(pairs)]))
            fam.append(tuple(1 + sum(bits[(min(i, j), max(i, j))] == (i < j) for i in range(1, n + 1) if i != j) for j in range(1, n + 1)))
        out.add(tuple(fam))
    return out


PURE_CASES = [
    (2, 1, 1, 0, False),
    (2, 2, 2, None, True),
    (3, 1, 2, None, True),
    (3, 2, 2, 0, False),
    (3, 2, 4, 0, False),
    (3, 2, 4, None, True),
    (3, 3, 6, 0, True),
    (3, 3, 6, None, True),
    (3, 2, 6, None, True),
    (4, 2, 2, 0, False),
    (4, 2, 4, None, True),
    (4, 3, 6, None, True),
    (4, 1, 3, None, True),
]


@pytest.mark.parametrize("n,k,d,H,ff", PURE_CASES)
def test_pure_projected_models_match_oracle(n, k, d, H, ff):
    cfg = ModelConfig(n, k, d, "pure", H=H, fix_first=ff)
    f, dm = build_pure(cfg)
    got = models_as_tuples(f, dm, range(1, d + 1))
    assert got == oracle_pure(n, k, d, cfg.H, ff)


@pytest.mark.parametrize("n,k,d", [(3, 3, 6), (4, 3, 6), (3, 2, 4), (4, 2, 2)])
def test_rankwise_projected_models_match_oracle(n, k, d):
    cfg = ModelConfig(n, k, d, "pure", rankwise=True)
    f, dm = build_pure(cfg)
    got = models_as_tuples(f, dm, range(1, d + 1))
    assert got == oracle_pure(n, k, d, cfg.H, True, rankwise=True)


def all_valid_configs(max_n=4, max_d=8):
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            for d in range(1, max_d + 1):
                try:
                    yield ModelConfig(n, k, d)
                except ValueError:
                    pass


def family_exists(n, k, d):
    """Multiset search over S_n, pruned by the per-pattern caps d/j; no symmetry breaking."""
    sn = list(itertools.permutations(range(1, n + 1)))
    pats = [(s, d // j) for j in range(2, k + 1) for s in enumerate_sop(n, j)]
    hits = [[all(p[s[0] - 1] < p[t - 1] for t in s[1:]) for s, _ in pats] for p in sn]
    counts = [0] * len(pats)

    def rec(start, size):
        if size == d:
            return all(c == cap for c, (_, cap) in zip(counts, pats))
        for idx in range(start, len(sn)):
            row = hits[idx]
            if any(h and c >= cap for h, c, (_, cap) in zip(row, counts, pats)):
                continue
            for a, h in enumerate(row):
                counts[a] += h
            ok = rec(idx, size + 1)
            for a, h in enumerate(row):
                counts[a] -= h
            if ok:
                return True
        return False

    return rec(0, 0)


def test_pure_satisfiability_equals_brute_force_search():
    for cfg in all_valid_configs():
        f, dm = build(cfg)
        res = solve_internal(f, 60)
        assert res.status in ("sat", "unsat")
        assert res.sat == family_exists(cfg.n, cfg.k, cfg.d), cfg
        if res.sat:
            assert holds(decode(res.model, dm), cfg.k)


def test_builder_rejects_bad_configs():
    with pytest.raises(ValueError):
        ModelConfig(4, 4, 6)
    with pytest.raises(ValueError):
        ModelConfig(4, 3, 6, "left", closure([(2, 3, 4, 1)]))
    with pytest.raises(ValueError):
        ModelConfig(4, 5, 60)
    with pytest.raises(ValueError):
        ModelConfig(4, 2, 2, H=7)
    with pytest.raises(ValueError):
        ModelConfig(4, 2, 2, mode="other")
    with pytest.raises(ValueError):
        ModelConfig(4, 3, 9, rankwise=True)


def test_default_accuracy_table():
    assert [default_accuracy(n) for n in range(1, 9)] == [0, 1, 3, 5, 7, 10, 13, 16]
    assert ModelConfig(4, 3, 6).H == 5
    assert ModelConfig(2, 2, 2).H == 1


def test_pure_first_member_is_identity_and_chain():
    cfg = ModelConfig(4, 4, 12)
    f, dm = build(cfg)
    res = solve_internal(f, 120)
    assert res.sat
    fam = decode(res.model, dm)
    assert fam[0] == identity(4)
    z = [zcat_of(p)[: cfg.H] for p in fam]
    assert z == sorted(z, reverse=True)
    assert holds(fam, 4)


def oracle_cosets(cfg):
    """Offset tuples (as families) whose coset expansion is independent, with the offset chain."""
    n, q = cfg.n, cfg.q
    sn = list(itertools.permutations(range(1, n + 1)))
    z = {p: zcat_of(p)[: cfg.H] for p in sn}
    out = set()

    def expand(thetas):
        if cfg.mode == "left":
            return [compose(t, g) for t in thetas for g in cfg.group.elements]
        if cfg.permute_rows:
            return [compose(t, g) for t in thetas for g in cfg.group.elements]
        return [compose(g, t) for t in thetas for g in cfg.group.elements]

    def rec(prefix):
        if len(prefix) == cfg.offsets:
            fam = expand(prefix)
            if holds(fam, cfg.k, cfg.rankwise):
                out.add(tuple(fam))
            return
        for p in sn:
            if not prefix and cfg.mode == "right" and cfg.fix_first and p != identity(n):
                continue
            if prefix and z[p] > z[prefix[-1]]:
                continue
            rec(prefix + [p])

    rec([])
    return out


def enumerate_decoded(cfg):
    f, dm = build(cfg)
    if cfg.mode == "left":
        variables = x_vars(dm, range(1, cfg.offsets + 1))
    else:
        variables = list(dm.t.values())
    return {tuple(decode(model, dm)) for model in projected_models(f, variables).values()}


COSET_CASES = [
    (4, 3, 6, "left", [(2, 3, 1, 4)]),
    (4, 3, 6, "left", [(2, 1, 3, 4)]),
    (4, 3, 6, "left", [(2, 1, 4, 3)]),
    (4, 3, 6, "left", [(2, 3, 1, 4), (2, 1, 3, 4)]),
    (4, 4, 12, "left", [(2, 3, 1, 4), (1, 3, 4, 2)]),
    (4, 4, 12, "left", [(2, 3, 1, 4), (2, 1, 3, 4)]),
    (4, 4, 12, "left", [(2, 1, 4, 3), (3, 4, 1, 2)]),
    (4, 3, 6, "right", [(2, 3, 1, 4)]),
    (4, 3, 6, "right", [(2, 1, 3, 4)]),
    (4, 3, 6, "right", [(2, 1, 4, 3)]),
    (4, 3, 6, "right", [(2, 3, 1, 4), (2, 1, 3, 4)]),
    (4, 4, 12, "right", [(2, 3, 1, 4), (1, 3, 4, 2)]),
    (4, 4, 12, "right", [(2, 1, 4, 3), (3, 4, 1, 2)]),
    (4, 4, 12, "right", [(2, 3, 4, 1)]),
]


@pytest.mark.parametrize("n,k,d,mode,gens", COSET_CASES)
def test_coset_models_match_oracle(n, k, d, mode, gens):
    cfg = ModelConfig(n, k, d, mode, closure(gens, n))
    assert enumerate_decoded(cfg) == oracle_cosets(cfg)


@pytest.mark.parametrize("gens", [[(2, 3, 1, 4)], [(2, 1, 4, 3)], [(2, 1, 3, 4)]])
def test_literal_right_reading_matches_its_oracle(gens):
    cfg = ModelConfig(4, 3, 6, "right", closure(gens, 4), permute_rows=True)
    assert enumerate_decoded(cfg) == oracle_cosets(cfg)


def test_left_single_identity_offset_is_group():
    g = subgroups_of_order(4, 12)[0]
    cfg = ModelConfig(4, 4, 12, "left", g)
    f, dm = build(cfg)
    for (m, i, j), v in dm.x.items():
        f.add_clause([v])
    res = solve_internal(f)
    assert res.sat
    assert sorted(decode(res.model, dm)) == sorted(g.elements)


def test_right_model_order_12():
    g = subgroups_of_order(4, 12)[0]
    f, dm = build(ModelConfig(4, 4, 12, "right", g))
    res = solve_internal(f, 60)
    assert res.sat
    fam = decode(res.model, dm)
    assert holds(fam, 4) and fam[0] == identity(4)


def test_trivial_group_left_equisatisfiable_with_pure():
    for cfg in list(all_valid_configs(4, 6)) + [ModelConfig(4, 4, 12)]:
        left = ModelConfig(cfg.n, cfg.k, cfg.d, "left", closure([], cfg.n))
        a = solve_internal(build(cfg)[0], 60)
        b = solve_internal(build(left)[0], 60)
        assert a.status == b.status, cfg


@needs_pysat
@pytest.mark.parametrize("d,n,k", [(6, 4, 3), (12, 4, 4), (12, 5, 4), (12, 6, 4)])
def test_trivial_group_left_equisatisfiable_with_pure_suite_configs(d, n, k):
    a = solve(build(ModelConfig(n, k, d))[0], EXTERNAL_CMD, 300)
    b = solve(build(ModelConfig(n, k, d, "left", closure([], n)))[0], EXTERNAL_CMD, 300)
    assert a.status == b.status != "error"


@pytest.mark.parametrize("q", [2, 3])
def test_left_feasibility_is_conjugation_invariant(q):
    classes = conjugacy_classes(subgroups_of_order(4, q), 4)
    for c in classes:
        statuses = set()
        for g in c.members:
            res = solve_internal(build(ModelConfig(4, 4, 12, "left", g))[0], 60)
            statuses.add(res.status)
        assert len(statuses) == 1 and statuses <= {"sat", "unsat"}


def test_encoding_is_deterministic():
    g = subgroups_of_order(4, 3)[1]
    for cfg in [ModelConfig(4, 4, 12), ModelConfig(4, 4, 12, "left", g), ModelConfig(4, 4, 12, "right", g)]:
        a, b = build(cfg), build(cfg)
        assert dimacs_text(a[0]) == dimacs_text(b[0])


def test_map_round_trip():
    g = subgroups_of_order(4, 3)[2]
    for cfg in [ModelConfig(4, 3, 6, H=2), ModelConfig(4, 4, 12, "right", g, permute_rows=True), ModelConfig(4, 4, 12, "left", closure([], 4))]:
        f, dm = build(cfg)
        buf = io.StringIO()
        write_map(dm, buf)
        back = read_map(io.StringIO(buf.getvalue()))
        assert back.x == dm.x and back.t == dm.t
        assert back.cfg.group == cfg.group
        assert (back.cfg.n, back.cfg.k, back.cfg.d, back.cfg.mode, back.cfg.H) == (cfg.n, cfg.k, cfg.d, cfg.mode, cfg.H)
        assert back.cfg.permute_rows == cfg.permute_rows


def test_variable_names_are_annotated():
    f, dm = build(ModelConfig(3, 2, 2))
    assert f.names["x[1][1][2]"] == dm.x[(1, 1, 2)] == 1
    f, dm = build(ModelConfig(3, 2, 2, "right", closure([(2, 1, 3)])))
    assert f.names["t[1][1][1]"] == 1
