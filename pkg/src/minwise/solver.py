"""DIMACS files, solver invocation and turning models back into families.

External solvers follow the SAT-competition convention: DIMACS in, ``s``/``v``
lines (and/or exit codes 10/20) out.  They are configured by a command
template such as ``"mysolver {cnf}"``; a ``{model}`` placeholder, if present,
names a file the solver writes its answer to instead (``SAT``/``UNSAT``
first line, then the literals).  The default template is read from the
``MINWISE_SOLVER_CMD`` environment variable.

``solve_internal`` is a small complete DPLL solver (two watched literals,
chronological backtracking, branching on the lowest free variable, true
first) so nothing outside Python is required.
"""

from __future__ import annotations

import io
import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cnf import CnfFormula
from .encoder import DecodeMap
from .perm import Perm, compose, from_incidence, from_perm_matrix

SOLVER_ENV = "MINWISE_SOLVER_CMD"
INTERNAL_CLAUSE_LIMIT = 200_000

SAT, UNSAT, UNKNOWN, ERROR = "sat", "unsat", "unknown", "error"


@dataclass
class SolveResult:
    status: str
    model: dict[int, bool] | None = None
    elapsed: float = 0.0
    solver_id: str = "internal"
    message: str = ""
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == SAT


def write_dimacs(f: CnfFormula, sink) -> None:
    sink.write(f"p cnf {f.num_vars} {f.num_clauses}\n")
    for c in f.clauses:
        sink.write(" ".join(map(str, c)) + (" 0\n" if c else "0\n"))


def dimacs_text(f: CnfFormula) -> str:
    buf = io.StringIO()
    write_dimacs(f, buf)
    return buf.getvalue()


def save_dimacs(f: CnfFormula, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        write_dimacs(f, fh)


def read_dimacs(source) -> CnfFormula:
    """Parse DIMACS text (a string or an iterable of lines)."""
    if isinstance(source, str):
        source = source.splitlines()
    f = CnfFormula()
    declared = None
    pending: list[int] = []
    for line in source:
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            f.num_vars = int(parts[2])
            declared = int(parts[3])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                f.add_clause(pending)
                pending = []
            else:
                pending.append(v)
    if pending:
        f.add_clause(pending)
    if declared is not None and declared != f.num_clauses:
        raise ValueError(f"header declares {declared} clauses, found {f.num_clauses}")
    return f


def load_dimacs(path) -> CnfFormula:
    with open(path, encoding="ascii") as fh:
        return read_dimacs(fh)


class _Timeout(Exception):
    pass


def solve_internal(f: CnfFormula, time_limit: float | None = None) -> SolveResult:
    start = time.perf_counter()
    if f.num_clauses > INTERNAL_CLAUSE_LIMIT:
        return SolveResult(UNKNOWN, elapsed=0.0, message=f"more than {INTERNAL_CLAUSE_LIMIT} clauses")
    try:
        status, model, stats = _dpll(f.num_vars, f.clauses, start, time_limit)
    except _Timeout:
        return SolveResult(UNKNOWN, elapsed=time.perf_counter() - start, message="time limit")
    return SolveResult(status, model, time.perf_counter() - start, "internal", stats=stats)


def _dpll(nv: int, clauses, start: float, time_limit: float | None):
    off = nv
    val = [0] * (2 * nv + 1)  # val[lit + off]: 1 true, -1 false, 0 free
    watches: list[list[list[int]]] = [[] for _ in range(2 * nv + 1)]
    units = []
    for c in clauses:
        c = list(dict.fromkeys(c))
        if any(-l in c for l in c):
            continue
        if not c:
            return UNSAT, None, {"decisions": 0, "propagations": 0}
        if len(c) == 1:
            units.append(c[0])
            continue
        watches[c[0] + off].append(c)
        watches[c[1] + off].append(c)

    trail: list[int] = []
    # decision stack: (trail length before the decision, decision literal, already flipped)
    decisions: list[tuple[int, int, bool]] = []
    stats = {"decisions": 0, "propagations": 0}

    def assign(lit):
        val[lit + off] = 1
        val[-lit + off] = -1
        trail.append(lit)

    def propagate(qhead):
        """Returns (conflict?, new queue head)."""
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            false_lit = -lit
            ws = watches[false_lit + off]
            keep = []
            i = 0
            nws = len(ws)
            while i < nws:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if val[first + off] == 1:
                    keep.append(c)
                    continue
                for k in range(2, len(c)):
                    if val[c[k] + off] != -1:
                        c[1], c[k] = c[k], c[1]
                        watches[c[1] + off].append(c)
                        break
                else:
                    keep.append(c)
                    if val[first + off] == -1:
                        keep.extend(ws[i:])
                        watches[false_lit + off] = keep
                        return True, qhead
                    stats["propagations"] += 1
                    assign(first)
            watches[false_lit + off] = keep
        return False, qhead

    for u in units:
        v = val[u + off]
        if v == -1:
            return UNSAT, None, stats
        if v == 0:
            assign(u)
    conflict, qhead = propagate(0)
    if conflict:
        return UNSAT, None, stats

    next_var = 1
    tick = 0
    while True:
        if not conflict:
            while next_var <= nv and val[next_var + off] != 0:
                next_var += 1
            if next_var > nv:
                model = {v: val[v + off] == 1 for v in range(1, nv + 1)}
                return SAT, model, stats
            stats["decisions"] += 1
            decisions.append((len(trail), next_var, False))
            assign(next_var)
        else:
            # chronological backtracking to the latest unflipped decision
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return UNSAT, None, stats
            mark, lit, _ = decisions.pop()
            for l in trail[mark:]:
                val[l + off] = 0
                val[-l + off] = 0
            del trail[mark:]
            next_var = min(next_var, abs(lit))
            decisions.append((mark, -lit, True))
            assign(-lit)
            qhead = mark
        conflict, qhead = propagate(qhead)
        tick += 1
        if time_limit is not None and tick % 256 == 0 and time.perf_counter() - start > time_limit:
            raise _Timeout


def default_command() -> str | None:
    return os.environ.get(SOLVER_ENV) or None


def parse_solver_output(text: str, returncode: int | None = None) -> tuple[str, dict[int, bool] | None]:
    """Read competition-style output; exit codes 10/20 are accepted without ``s`` lines."""
    status = None
    lits: list[int] = []
    lines = text.splitlines()
    for line in lines:
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            status = {"SATISFIABLE": SAT, "UNSATISFIABLE": UNSAT}.get(word, UNKNOWN)
        elif line.startswith("v "):
            lits.extend(int(t) for t in line[2:].split())
    if status is None and lines and lines[0].strip() in ("SAT", "UNSAT", "INDET"):
        # model-file format: verdict line then literals
        status = {"SAT": SAT, "UNSAT": UNSAT}.get(lines[0].strip(), UNKNOWN)
        lits = [int(t) for ln in lines[1:] for t in ln.split()]
    if status is None and returncode in (10, 20):
        status = SAT if returncode == 10 else UNSAT
    if status is None:
        raise ValueError("no verdict in solver output")
    model = None
    if status == SAT:
        model = {abs(l): l > 0 for l in lits if l != 0}
    return status, model


def run_external(cnf_path, command: str | None = None, time_limit: float | None = None) -> SolveResult:
    """Run an external solver on a DIMACS file.

    Never fabricates a verdict: a missing binary or unreadable output gives
    status ``error``, hitting the time limit gives ``unknown``.
    """
    command = command or default_command()
    if not command:
        return SolveResult(ERROR, solver_id="external", message=f"no solver command (set {SOLVER_ENV})")
    if "{cnf}" not in command:
        return SolveResult(ERROR, solver_id=command, message="command template lacks {cnf}")
    model_path = None
    tmpdir = None
    if "{model}" in command:
        tmpdir = tempfile.TemporaryDirectory()
        model_path = Path(tmpdir.name) / "model.txt"
    argv = [
        a.replace("{cnf}", str(cnf_path)).replace("{model}", str(model_path)) for a in shlex.split(command)
    ]
    start = time.perf_counter()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=time_limit)
    except FileNotFoundError as exc:
        return SolveResult(ERROR, solver_id=command, message=str(exc))
    except subprocess.TimeoutExpired:
        return SolveResult(UNKNOWN, elapsed=time.perf_counter() - start, solver_id=command, message="time limit")
    finally:
        elapsed = time.perf_counter() - start
    try:
        text = proc.stdout
        if model_path is not None and model_path.exists():
            text = model_path.read_text()
        status, model = parse_solver_output(text, proc.returncode)
    except ValueError as exc:
        return SolveResult(ERROR, elapsed=elapsed, solver_id=command, message=f"{exc}; stderr: {proc.stderr[-500:]}")
    finally:
        if tmpdir is not None:
            tmpdir.cleanup()
    return SolveResult(status, model, elapsed, command)


def solve(f: CnfFormula, command: str | None = None, time_limit: float | None = None) -> SolveResult:
    """Solve with an external command if one is given (or configured), else internally."""
    command = command or default_command()
    if not command:
        return solve_internal(f, time_limit)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "formula.cnf"
        save_dimacs(f, path)
        return run_external(path, command, time_limit)


class DecodeError(RuntimeError):
    """A model violates the order axioms: the encoding is broken."""


def decode(model: dict[int, bool], dm: DecodeMap) -> list[Perm]:
    """Rebuild the family a satisfying assignment describes.

    Pure and left mode read permutations from column sums of the order bits;
    left mode then expands theta_l o gamma_m.  Right mode reads theta_l from
    its permutation matrix and expands gamma_m o theta_l (theta_l o gamma_m
    under the literal row reading), cross-checking every member against its
    derived order bits.  Offsets are the outer index.
    """
    cfg = dm.cfg
    n = cfg.n

    def order_of(member):
        mat = np.zeros((n, n), dtype=bool)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                v = model.get(dm.x[(member, i, j)], False)
                mat[i - 1, j - 1] = v
                mat[j - 1, i - 1] = not v
        try:
            return from_incidence(mat)
        except ValueError as exc:
            raise DecodeError(f"member {member}: {exc}") from exc

    if cfg.mode == "pure":
        return [order_of(m) for m in range(1, cfg.d + 1)]
    elems = cfg.group.elements
    if cfg.mode == "left":
        return [compose(order_of(l), g) for l in range(1, cfg.offsets + 1) for g in elems]
    family = []
    for l in range(1, cfg.offsets + 1):
        mat = np.array([[model.get(dm.t[(l, i, c)], False) for c in range(1, n + 1)] for i in range(1, n + 1)])
        try:
            theta = from_perm_matrix(mat)
        except ValueError as exc:
            raise DecodeError(f"offset {l}: {exc}") from exc
        for m, g in enumerate(elems, start=1):
            member = compose(theta, g) if cfg.permute_rows else compose(g, theta)
            if order_of((l - 1) * cfg.q + m) != member:
                raise DecodeError(f"offset {l}, group element {m}: order bits disagree with T")
            family.append(member)
    return family
