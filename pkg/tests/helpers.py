"""Small brute-force oracles shared by the tests."""

import itertools

from minwise.cnf import CnfFormula


def brute_sat(num_vars, clauses, fixed=None):
    """Exhaustive satisfiability over all variables not in ``fixed``; only for tiny formulas."""
    fixed = dict(fixed or {})
    free = [v for v in range(1, num_vars + 1) if v not in fixed]
    for bits in itertools.product((False, True), repeat=len(free)):
        val = dict(fixed)
        val.update(zip(free, bits))
        if all(any(val[abs(l)] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def sat_with(f: CnfFormula, assumptions):
    """Satisfiable after adding unit clauses; uses unit propagation plus search on a copy."""
    from minwise.solver import solve_internal

    g = CnfFormula()
    g.num_vars = f.num_vars
    g.clauses = list(f.clauses)
    for lit in assumptions:
        g.add_clause([lit])
    return solve_internal(g).sat


def projected_models(f: CnfFormula, variables, limit=5000):
    """Distinct assignments to ``variables`` that extend to a model, each with one full model."""
    from minwise.solver import solve_internal

    g = CnfFormula()
    g.num_vars = f.num_vars
    g.clauses = list(f.clauses)
    seen = {}
    while len(seen) < limit:
        res = solve_internal(g)
        if not res.sat:
            return seen
        key = tuple(res.model[v] for v in variables)
        assert key not in seen
        seen[key] = res.model
        g.add_clause([-v if b else v for v, b in zip(variables, key)])
    raise AssertionError("too many models")
