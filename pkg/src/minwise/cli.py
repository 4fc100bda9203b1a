"""Command line interface: ``minwise <command> ...``.

Exit codes: 0 ok, 1 usage/input error, 2 infeasible (or property fails) when
existence was demanded, 3 solver failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bijection, bounds
from .encoder import ModelConfig, build, read_map, write_map
from .family import (
    double,
    format_family,
    minhash_pairs,
    read_family,
    restrict,
    verify_minwise,
    verify_rankwise,
    write_family,
)
from .groups import (
    class_representatives,
    closure,
    conjugacy_classes,
    parse_generator_line,
    read_group_file,
    subgroups_of_order,
    write_group_file,
)
from .perm import format_perm, parse_perm
from .solver import ERROR, SAT, UNKNOWN, UNSAT, decode, load_dimacs, run_external, save_dimacs, solve, solve_internal
from .sweep import SolverFailure, format_table, sweep

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad command lines; 2 means infeasible here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _accuracy(text: str):
    if text == "auto":
        return None
    if text == "off":
        return 0
    return int(text)


def _model_args(p: argparse.ArgumentParser, modes=("pure", "left", "right")) -> None:
    p.add_argument("--n", type=int, required=True, help="ground set size")
    p.add_argument("--k", type=int, required=True, help="independence level")
    p.add_argument("--d", type=int, required=True, help="number of family members")
    p.add_argument("--mode", choices=modes, default="pure")
    p.add_argument("--H", type=_accuracy, default=None, metavar="INT|auto|off", help="symmetry breaking prefix length")
    p.add_argument("--rankwise", action="store_true", help="encode k-rankwise instead of k-restricted minwise")
    p.add_argument("--no-fix-first", action="store_true", help="do not fix the first member/offset to the identity")
    p.add_argument(
        "--paper-literal-right",
        "--permute-rows",
        dest="permute_rows",
        action="store_true",
        help="right mode: reorder rows of the offset matrix instead of columns (gives theta o gamma)",
    )
    g = p.add_argument_group("subgroup selection (left/right modes)")
    g.add_argument("--group", help="generators, e.g. '2 1 3 4; 2 3 1 4'")
    g.add_argument("--group-file", help="generator file; one subgroup per line")
    g.add_argument("--group-line", type=int, default=1, help="1-based line of --group-file to use")
    g.add_argument("--group-order", type=int, help="pick an enumerated subgroup of this order")
    g.add_argument("--group-index", type=int, default=1, help="1-based index among subgroups of --group-order")


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver-cmd", help="external solver command template containing {cnf}")
    p.add_argument("--internal", action="store_true", help="use the built-in DPLL solver")
    p.add_argument("--time-limit", type=float, default=None, help="seconds per solver run")


def _config(a) -> ModelConfig:
    group = None
    if a.mode != "pure":
        if a.group:
            group = closure(parse_generator_line(a.group), a.n)
        elif a.group_file:
            subs = read_group_file(a.group_file)
            if not 1 <= a.group_line <= len(subs):
                raise UsageError(f"{a.group_file} has {len(subs)} subgroups")
            group = subs[a.group_line - 1]
        elif a.group_order:
            subs = (
                class_representatives(a.n, a.group_order)
                if a.mode == "left"
                else subgroups_of_order(a.n, a.group_order)
            )
            if not 1 <= a.group_index <= len(subs):
                raise UsageError(f"only {len(subs)} subgroups of order {a.group_order} to choose from")
            group = subs[a.group_index - 1]
        else:
            group = closure([], a.n)
    return ModelConfig(
        a.n,
        a.k,
        a.d,
        a.mode,
        group,
        H=a.H,
        fix_first=not a.no_fix_first,
        rankwise=a.rankwise,
        permute_rows=a.permute_rows,
    )


def cmd_encode(a) -> int:
    cfg = _config(a)
    f, dm = build(cfg)
    out = Path(a.out)
    save_dimacs(f, out)
    map_path = Path(a.map) if a.map else out.with_name(out.name + ".map")
    with open(map_path, "w", encoding="ascii", newline="\n") as fh:
        write_map(dm, fh)
    print(f"wrote {out} ({f.num_vars} vars, {f.num_clauses} clauses) and {map_path}")
    return EXIT_OK


def _run_solver(a, f):
    if a.internal:
        return solve_internal(f, a.time_limit)
    return solve(f, a.solver_cmd, a.time_limit)


def cmd_solve(a) -> int:
    if a.cnf:
        if not a.map:
            raise UsageError("--cnf needs --map")
        with open(a.map, encoding="ascii") as fh:
            dm = read_map(fh)
        if a.internal or not (a.solver_cmd or _env_cmd()):
            res = solve_internal(load_dimacs(a.cnf), a.time_limit)
        else:
            res = run_external(a.cnf, a.solver_cmd, a.time_limit)
    else:
        for req in ("n", "k", "d"):
            if getattr(a, req) is None:
                raise UsageError(f"--{req} is required without --cnf")
        cfg = _config(a)
        f, dm = build(cfg)
        res = _run_solver(a, f)
    print(f"status {res.status} ({res.elapsed:.3g}s, {res.solver_id})")
    if res.status == ERROR:
        print(res.message, file=sys.stderr)
        return EXIT_SOLVER
    if res.status == UNKNOWN:
        return EXIT_SOLVER
    if res.status == UNSAT:
        return EXIT_INFEASIBLE if a.demand else EXIT_OK
    fam = decode(res.model, dm)
    check = verify_rankwise if dm.cfg.rankwise else verify_minwise
    report = check(fam, dm.cfg.k)
    print(report.describe())
    if not report.holds:
        print("decoded family fails verification", file=sys.stderr)
        return EXIT_SOLVER
    if a.out:
        write_family(fam, a.out, comment=f"{dm.cfg.mode} model n={dm.cfg.n} k={dm.cfg.k} d={dm.cfg.d}")
    else:
        sys.stdout.write(format_family(fam))
    return EXIT_OK


def _env_cmd():
    from .solver import default_command

    return default_command()


def cmd_verify(a) -> int:
    fam = read_family(a.family)
    report = (verify_rankwise if a.rankwise else verify_minwise)(fam, a.k)
    print(report.describe())
    return EXIT_OK if report.holds else EXIT_INFEASIBLE


def cmd_groups(a) -> int:
    subs = subgroups_of_order(a.n, a.order)
    classes = conjugacy_classes(subs, a.n)
    print(f"S_{a.n}: {len(subs)} subgroups of order {a.order} in {len(classes)} conjugacy classes")
    for i, c in enumerate(classes, start=1):
        print(f"  class {i}: size {c.size}, representative <{c.representative.describe()}>")
    if a.out:
        write_group_file([c.representative for c in classes] if a.classes else subs, a.out)
    return EXIT_OK


def cmd_sweep(a) -> int:
    modes = ("left", "right") if a.mode == "both" else (a.mode,)
    orders = None if a.orders in (None, "all") else [int(q) for q in a.orders.split(",")]
    try:
        report = sweep(
            a.n,
            a.k,
            a.d,
            modes=modes,
            orders=orders,
            time_limit=a.time_limit,
            solver_cmd=a.solver_cmd,
            internal=a.internal,
            H=a.H,
            rankwise=a.rankwise,
            permute_rows=a.permute_rows,
            jobs=a.jobs,
        )
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    print(format_table(report))
    if a.report:
        Path(a.report).write_text(report.to_json(timings=not a.no_timings))
    return EXIT_OK


def cmd_bounds(a) -> int:
    n, k = a.n, a.k
    lcm = bounds.lcm_upto(k)
    print(f"lcm(1..{k}) = {lcm}")
    print(f"minwise lower bound max(n, lcm) = {bounds.lower_bound(n, k)}")
    print(f"minwise upper bound (ceiling) = {bounds.upper_bound(n, k)}")
    print(f"rankwise lower bound = {bounds.bargachev_bound(n, k)}")
    return EXIT_OK


def cmd_bijection(a) -> int:
    if a.action == "table":
        if a.n is None:
            raise UsageError("table needs --n")
        print(bijection.format_table(a.n))
        return EXIT_OK
    p = parse_perm(" ".join(a.perm))
    out = bijection.phi(p) if a.action == "phi" else bijection.phi_inverse(p)
    print(format_perm(out))
    if a.verbose:
        print(f"fixed points of input: {bijection.fixed_points(p)}")
        print(f"waste indices of input: {bijection.waste_indices(p)}")
    return EXIT_OK


def cmd_double(a) -> int:
    fam = double(read_family(a.family), a.k)
    _emit(fam, a.out)
    return EXIT_OK


def cmd_restrict(a) -> int:
    fam = restrict(read_family(a.family), a.to)
    _emit(fam, a.out)
    return EXIT_OK


def _emit(fam, out):
    if out:
        write_family(fam, out)
    else:
        sys.stdout.write(format_family(fam))


def cmd_minhash_check(a) -> int:
    fam = read_family(a.family)
    report = verify_minwise(fam, a.k)
    if not report.holds and not a.force:
        print(f"refusing unverified family: {report.describe()}", file=sys.stderr)
        return EXIT_USAGE
    failures = 0
    for pc in minhash_pairs(fam, a.k):
        tag = "ok  " if pc.ok else "FAIL"
        failures += not pc.ok
        if a.verbose or not pc.ok:
            print(f"{tag} A={set(pc.a)} B={set(pc.b)} P={pc.probability} J={pc.expected}")
    print(f"{failures} failing pairs")
    return EXIT_OK if failures == 0 else EXIT_INFEASIBLE


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="minwise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="write DIMACS and decode map for one model")
    _model_args(p)
    p.add_argument("--out", required=True, help="DIMACS output path")
    p.add_argument("--map", help="decode map path (default: OUT.map)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="build, solve, decode and verify one model")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--mode", choices=("pure", "left", "right"), default="pure")
    p.add_argument("--H", type=_accuracy, default=None)
    p.add_argument("--rankwise", action="store_true")
    p.add_argument("--no-fix-first", action="store_true")
    p.add_argument("--paper-literal-right", "--permute-rows", dest="permute_rows", action="store_true")
    p.add_argument("--group")
    p.add_argument("--group-file")
    p.add_argument("--group-line", type=int, default=1)
    p.add_argument("--group-order", type=int)
    p.add_argument("--group-index", type=int, default=1)
    p.add_argument("--cnf", help="solve an existing DIMACS file instead of building one")
    p.add_argument("--map", help="decode map for --cnf")
    p.add_argument("--out", help="write the family here")
    p.add_argument("--demand", action="store_true", help="exit 2 if no family exists")
    _solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a family file")
    p.add_argument("family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rankwise", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("groups", help="enumerate subgroups of S_n of one order")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--classes", action="store_true", help="write class representatives only")
    p.add_argument("--out", help="generator file to write")
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("sweep", help="one instance per subgroup; Table-style summary")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=("pure", "left", "right", "both"), default="both")
    p.add_argument("--orders", default="all", help="comma separated list or 'all'")
    p.add_argument("--H", type=_accuracy, default=None)
    p.add_argument("--rankwise", action="store_true")
    p.add_argument("--paper-literal-right", "--permute-rows", dest="permute_rows", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--out", dest="report", help="alias of --report")
    p.add_argument("--no-timings", action="store_true", help="omit timing fields from the JSON report")
    _solver_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="size bounds for given n and k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bijection", help="fixed points <-> waste indices")
    p.add_argument("action", choices=("phi", "inverse", "table"))
    p.add_argument("perm", nargs="*", help="one-line permutation")
    p.add_argument("--n", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_bijection)

    p = sub.add_parser("double", help="append reversed copies (odd k -> k+1)")
    p.add_argument("family")
    p.add_argument("--k", type=int, help="independence level of the input (must be odd)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("restrict", help="restrict a family to fewer symbols")
    p.add_argument("family")
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("minhash-check", help="collision probability vs Jaccard similarity")
    p.add_argument("family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--force", action="store_true", help="check even if the family does not verify")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_minhash_check)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    a = parser.parse_args(argv)
    try:
        return a.func(a)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
