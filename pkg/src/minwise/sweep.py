"""Subgroup sweeps: one SAT instance per subgroup, summarised per (mode, |G|).

Left cosets are tried on one representative per conjugacy class, right
cosets on every subgroup (with theta_1 = id).  |G| = 1 is the pure model and
is listed under the left-coset columns only.  Every satisfying assignment is
decoded and re-verified; a decode that fails verification aborts the sweep.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .encoder import ModelConfig, build, default_accuracy
from .family import verify_minwise, verify_rankwise
from .groups import Subgroup, closure, conjugacy_classes, subgroups_of_order
from .solver import ERROR, SAT, UNKNOWN, UNSAT, decode, solve, solve_internal

SCHEMA = "minwise-sweep/1"


class SolverFailure(RuntimeError):
    pass


@dataclass
class InstanceRun:
    generators: str
    status: str
    elapsed: float
    family: list[list[int]] | None = None


@dataclass
class SweepRow:
    mode: str
    order: int
    existing: int
    considered: int
    feasible: int = 0
    infeasible: int = 0
    timeout: int = 0
    avg_feasible_s: float | None = None
    avg_infeasible_s: float | None = None
    runs: list[InstanceRun] = field(default_factory=list)

    def check(self) -> None:
        if self.feasible + self.infeasible + self.timeout != self.considered or self.considered > self.existing:
            raise AssertionError(f"inconsistent counts in row {self.mode} |G|={self.order}")


@dataclass
class SweepReport:
    d: int
    n: int
    k: int
    solver: str
    time_limit: float | None
    H: int | None
    rows: list[SweepRow] = field(default_factory=list)
    schema: str = SCHEMA

    def to_json(self, timings: bool = True) -> str:
        data = asdict(self)
        if not timings:
            for row in data["rows"]:
                row.pop("avg_feasible_s")
                row.pop("avg_infeasible_s")
                for run in row["runs"]:
                    run.pop("elapsed")
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def row(self, mode: str, order: int) -> SweepRow | None:
        for r in self.rows:
            if r.mode == mode and r.order == order:
                return r
        return None


def default_orders(n: int, d: int) -> list[int]:
    """Divisors of d that also divide n!, largest first."""
    nf = math.factorial(n)
    return [q for q in range(d, 0, -1) if d % q == 0 and nf % q == 0]


def run_instance(cfg: ModelConfig, solver_cmd: str | None, internal: bool, time_limit: float | None) -> InstanceRun:
    f, dm = build(cfg)
    res = solve_internal(f, time_limit) if internal else solve(f, solver_cmd, time_limit)
    gens = cfg.group.describe() if cfg.group is not None else ""
    if res.status == ERROR:
        raise SolverFailure(res.message)
    if res.status != SAT:
        return InstanceRun(gens, res.status, res.elapsed)
    fam = decode(res.model, dm)
    check = verify_rankwise if cfg.rankwise else verify_minwise
    report = check(fam, cfg.k)
    if not report.holds:
        raise AssertionError(f"decoded family fails verification ({report.describe()}); encoder bug")
    return InstanceRun(gens, SAT, res.elapsed, [list(p) for p in fam])


def sweep(
    n: int,
    k: int,
    d: int,
    modes=("left", "right"),
    orders=None,
    time_limit: float | None = None,
    solver_cmd: str | None = None,
    internal: bool = False,
    H: int | None = None,
    rankwise: bool = False,
    permute_rows: bool = False,
    jobs: int = 1,
    max_per_order: int | None = None,
) -> SweepReport:
    orders = default_orders(n, d) if orders is None else sorted(set(orders), reverse=True)
    solver_name = "internal" if internal or not solver_cmd else solver_cmd
    report = SweepReport(d, n, k, solver_name, time_limit, default_accuracy(n) if H is None else H)

    plan: list[tuple[SweepRow, list[ModelConfig]]] = []
    if "pure" in modes:
        cfg = ModelConfig(n, k, d, "pure", H=H, rankwise=rankwise)
        plan.append((SweepRow("pure", 1, 1, 1), [cfg]))
    for q in orders:
        if "left" in modes:
            if q == 1:
                cfgs = [ModelConfig(n, k, d, "pure", H=H, rankwise=rankwise)]
                existing = 1
            else:
                reps = [c.representative for c in conjugacy_classes(subgroups_of_order(n, q), n)]
                existing = len(reps)
                cfgs = [ModelConfig(n, k, d, "left", g, H=H, rankwise=rankwise) for g in reps[:max_per_order]]
            plan.append((SweepRow("left", q, existing, len(cfgs)), cfgs))
        if "right" in modes and q > 1:
            subs = subgroups_of_order(n, q)
            cfgs = [
                ModelConfig(n, k, d, "right", g, H=H, rankwise=rankwise, permute_rows=permute_rows)
                for g in subs[:max_per_order]
            ]
            plan.append((SweepRow("right", q, len(subs), len(cfgs)), cfgs))

    def work(cfg):
        return run_instance(cfg, solver_cmd, internal, time_limit)

    flat = [cfg for _, cfgs in plan for cfg in cfgs]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, flat))
    else:
        results = [work(cfg) for cfg in flat]

    pos = 0
    for row, cfgs in plan:
        row.runs = results[pos : pos + len(cfgs)]
        pos += len(cfgs)
        feas = [r.elapsed for r in row.runs if r.status == SAT]
        infeas = [r.elapsed for r in row.runs if r.status == UNSAT]
        row.feasible, row.infeasible = len(feas), len(infeas)
        row.timeout = sum(r.status == UNKNOWN for r in row.runs)
        row.avg_feasible_s = sum(feas) / len(feas) if feas else None
        row.avg_infeasible_s = sum(infeas) / len(infeas) if infeas else None
        row.check()
        report.rows.append(row)
    return report


def format_table(report: SweepReport) -> str:
    """Console table in the column layout #exst / #cnsd / feasible / infeasible, L and R side by side."""

    def cell(row, attr):
        if row is None:
            return "/"
        v = getattr(row, attr)
        if v is None:
            return "/"
        return f"{v:.2g}" if isinstance(v, float) else str(v)

    head = ["(d,n)", "|G|", "exst L", "exst R", "cnsd L", "cnsd R", "feas L", "feas R",
            "t_feas L", "t_feas R", "infeas L", "infeas R", "t_inf L", "t_inf R", "t/o R"]
    lines = [" ".join(f"{h:>9}" for h in head)]
    orders = sorted({r.order for r in report.rows}, reverse=True)
    first = True
    for q in orders:
        left = report.row("left", q) or (report.row("pure", q) if q == 1 else None)
        right = report.row("right", q)
        vals = [f"({report.d},{report.n})" if first else "", str(q)]
        for attr in ("existing", "considered", "feasible", "avg_feasible_s", "infeasible", "avg_infeasible_s"):
            vals += [cell(left, attr), cell(right, attr)]
        vals.append(cell(right, "timeout"))
        lines.append(" ".join(f"{v:>9}" for v in vals))
        first = False
    return "\n".join(lines)


def group_from_generators(lines: list[str], n: int) -> Subgroup:
    from .groups import parse_generator_line

    gens = [g for line in lines for g in parse_generator_line(line)]
    return closure(gens, n)
