"""Solver front end and the MIP-based local search around a heuristic coloring."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from ..coloring import Coloring, ColoringError, is_b_coloring
from ..graph import Graph, m_bound
from .bb import branch_and_bound
from .lpfile import export_lp, import_solution
from .model import Assignment, InfeasibleFixingError, Model, Var, build_formulation, warm_start_from_coloring

log = logging.getLogger(__name__)

STATUSES = ("optimal", "feasible-time-limit", "infeasible", "unknown")
BACKENDS = ("internal-bb", "lp-export", "highs")
DEFAULT_TIME_LIMIT = 3600.0


class BackendError(RuntimeError):
    """The backend could not produce a usable answer (e.g. a bad solution file)."""


@dataclass
class MipSolution:
    assignment: Assignment | None
    objective_value: int
    bound: float
    status: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def has_solution(self) -> bool:
        return self.assignment is not None and self.status in ("optimal", "feasible-time-limit")


@dataclass(frozen=True)
class SolverBackend:
    """Which solver to run and its wall-clock limit in seconds.

    ``lp-export`` writes ``<workdir>/<name>.lp``; if ``solution_file`` exists
    it is imported, otherwise the result carries status ``unknown``.
    ``highs`` needs SciPy's bundled HiGHS and cannot take a warm start, so
    the warm start is returned whenever HiGHS does no better.
    """

    kind: str = "internal-bb"
    time_limit: float = DEFAULT_TIME_LIMIT
    workdir: str | os.PathLike = "."
    solution_file: str | os.PathLike | None = None

    def __post_init__(self):
        if self.kind not in BACKENDS:
            raise ValueError(f"unknown backend {self.kind!r}; expected one of {BACKENDS}")
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")


def solve(model: Model, backend: SolverBackend = SolverBackend(), warm: Assignment | None = None, name: str = "model") -> MipSolution:
    if warm is not None:
        bad = model.violations(warm)
        if bad:
            raise ValueError(f"warm start violates {len(bad)} rows, first {bad[0]}")
    cap = m_bound(model.graph)
    if backend.kind == "internal-bb":
        r = branch_and_bound(model, backend.time_limit, warm)
        log.info("branch-and-bound: %d nodes, %d assignment searches", r.nodes, r.csp_calls)
        if r.assignment is None:
            status = "infeasible" if r.complete else "unknown"
            return MipSolution(None, 0, 0 if r.complete else min(r.bound, cap), status)
        status = "optimal" if r.complete else "feasible-time-limit"
        return MipSolution(r.assignment, r.objective, min(r.bound, cap), status)
    if backend.kind == "highs":
        from .highs import solve_highs

        x, bound, status = solve_highs(model, backend.time_limit)
        bound = min(bound, cap)
        if warm is not None and (x is None or model.objective(x) < model.objective(warm)):
            if status == "infeasible":
                raise BackendError("HiGHS reports infeasible although the warm start is feasible")
            return MipSolution(dict(warm), model.objective(warm), max(bound, model.objective(warm)), "feasible-time-limit")
        if x is None:
            return MipSolution(None, 0, bound, status)
        return MipSolution(x, model.objective(x), bound, status)
    return _solve_by_file(model, backend, warm, name, cap)


def _solve_by_file(model: Model, backend: SolverBackend, warm: Assignment | None, name: str, cap: int) -> MipSolution:
    workdir = Path(backend.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    lp_path = workdir / f"{name}.lp"
    lp_path.write_text(export_lp(model))
    log.info("wrote %s", lp_path)
    sol_path = Path(backend.solution_file) if backend.solution_file is not None else None
    if sol_path is None or not sol_path.exists():
        x = dict(warm) if warm is not None else None
        return MipSolution(x, model.objective(x) if x else 0, cap, "unknown")
    try:
        x, objective, status = import_solution(model, sol_path.read_text())
    except ValueError as exc:
        raise BackendError(f"{sol_path}: {exc}") from exc
    status = status or "feasible-time-limit"
    if status in ("optimal", "feasible-time-limit"):
        bad = model.violations(x)
        if bad:
            raise BackendError(f"{sol_path}: imported solution violates {bad[0]}")
    bound = objective if status == "optimal" else cap
    return MipSolution(x, objective, bound, status)


def local_search_fixings(g: Graph, reps: set[int], num_colors: int) -> dict[Var, int]:
    """Keep every warm representative and drop low-degree non-representatives.

    x[u, u] = 1 for u in ``reps``; every variable of u is 0 for u outside
    ``reps`` with d(u) < ``num_colors``.
    """
    fix: dict[Var, int] = {(u, u): 1 for u in reps}
    deg = g.degrees
    for u in range(g.n):
        if u not in reps and deg[u] < num_colors:
            fix[(u, u)] = 0
            for v in g.anti_neighbors(u):
                fix[(u, v)] = 0
    return fix


def mip_local_search(g: Graph, c: Coloring, backend: SolverBackend = SolverBackend()) -> tuple[Coloring, MipSolution]:
    """Re-optimize around ``c`` with its representatives frozen; never returns fewer colors."""
    if not is_b_coloring(g, c):
        raise ColoringError("local search needs a b-coloring")
    warm, reps = warm_start_from_coloring(g, c)
    base = build_formulation(g)
    model = base.with_fixings(local_search_fixings(g, reps, c.num_colors))
    if not model.is_feasible(warm):
        raise InfeasibleFixingError("warm start violates the local-search fixings")
    sol = solve(model, backend, warm, name="mip_ls")
    if not sol.has_solution:
        # nothing better is known, keep the input coloring
        return c.copy(), MipSolution(warm, model.objective(warm), sol.bound, sol.status)
    out = model.decode(sol.assignment)
    if not is_b_coloring(g, out) or out.num_colors != sol.objective_value:
        raise BackendError("solver returned an assignment that does not decode to a b-coloring")
    return out, sol
