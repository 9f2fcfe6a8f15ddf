"""Experimental modes, table metrics and the benchmark harness."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .coloring import Coloring
from .constructive import RclParams
from .dimacs import DimacsError, read_dimacs
from .graph import Graph, InstanceMeta, m_bound
from .mip.model import apply_improvement_fixing, build_formulation, warm_start_from_coloring
from .mip.solve import DEFAULT_TIME_LIMIT, BackendError, SolverBackend, mip_local_search, solve
from .multistart import MultistartConfig, multistart_b_col

log = logging.getLogger(__name__)

MODES = ("msbcol", "msbcol-plus", "msbcol-star", "ip")
RUN_STATUSES = ("heuristic", "optimal", "time-limit", "halted")
CSV_COLUMNS = ("instance", "group", "|V|", "|E|", "m", "mode", "z", "z_avg", "time_s", "gap_pct", "status", "seed")
GROUP_COLUMNS = ("group", "mode", "members", "completed", "partial", "|V|", "|E|", "m", "z", "z_avg", "time_s", "gap_pct")
INSTANCE_SUFFIXES = (".col", ".clq")


def gap_percent(lb: float, ub: float) -> float:
    """Open gap 100 (ub - lb) / ub."""
    if ub <= 0:
        raise ValueError(f"upper bound must be positive, got {ub}")
    if lb < 0 or lb > ub:
        raise ValueError(f"need 0 <= lb <= ub, got lb={lb}, ub={ub}")
    return 100.0 * (ub - lb) / ub


def pct_best(z: float, best: float) -> float:
    """Distance to the best known value, 100 (best - z) / best."""
    if best <= 0:
        raise ValueError(f"best value must be positive, got {best}")
    return 100.0 * (best - z) / best


@dataclass(frozen=True)
class RunConfig:
    rcl: RclParams = RclParams()
    it_max: int | None = None
    seed: int = 0
    workers: int = 1
    time_limit: float = DEFAULT_TIME_LIMIT
    backend: str = "internal-bb"
    workdir: str = "."
    solution_file: str | None = None
    early_exit: bool = True

    def multistart(self) -> MultistartConfig:
        return MultistartConfig(
            rcl=self.rcl, it_max=self.it_max, seed=self.seed, workers=self.workers, early_exit=self.early_exit
        )

    def solver(self, time_left: float | None = None) -> SolverBackend:
        limit = self.time_limit if time_left is None else max(time_left, 0.01)
        return SolverBackend(self.backend, limit, self.workdir, self.solution_file)


@dataclass
class RunReport:
    instance: InstanceMeta
    mode: str
    n: int
    num_edges: int
    m_of_g: int
    z: int | None
    z_avg: float | None
    time_s: float
    gap_pct: float | None = None
    pct_best: float | None = None
    status: str = "heuristic"
    seed: int = 0
    coloring: Coloring | None = field(default=None, repr=False)
    note: str = ""

    def row(self) -> dict:
        return {
            "instance": self.instance.name,
            "group": self.instance.group,
            "|V|": self.n,
            "|E|": self.num_edges,
            "m": self.m_of_g,
            "mode": self.mode,
            "z": self.z,
            "z_avg": None if self.z_avg is None else round(self.z_avg, 4),
            "time_s": round(self.time_s, 3),
            "gap_pct": None if self.gap_pct is None else round(self.gap_pct, 2),
            "status": self.status,
            "seed": self.seed,
        }


def run_mode(
    g: Graph,
    mode: str,
    config: RunConfig = RunConfig(),
    meta: InstanceMeta | None = None,
    on_progress=None,
    best_known: float | None = None,
) -> RunReport:
    """Run one experimental mode on one instance.

    ``msbcol`` is the multi-start heuristic alone, ``msbcol-plus`` follows it
    with the MIP local search, ``msbcol-star`` solves the full model with the
    heuristic as warm start and degree fixing, and ``ip`` solves the bare
    model.  Solver and memory failures produce status ``halted``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    meta = meta or InstanceMeta("unnamed", "dimacs-col")
    report = RunReport(meta, mode, g.n, g.num_edges, m_bound(g), None, None, 0.0, seed=config.seed)
    t0 = time.perf_counter()
    try:
        _run(g, mode, config, report, on_progress, t0)
    except (BackendError, MemoryError, RecursionError) as exc:
        log.warning("%s/%s halted: %s", meta.name, mode, exc)
        report.status = "halted"
        report.note = f"{type(exc).__name__}: {exc}"
    report.time_s = time.perf_counter() - t0
    if best_known is not None and report.z is not None and best_known > 0:
        report.pct_best = pct_best(report.z, best_known)
    return report


def _run(g: Graph, mode: str, config: RunConfig, report: RunReport, on_progress, t0: float) -> None:
    m = report.m_of_g
    if mode == "ip":
        sol = solve(build_formulation(g), config.solver(), name=Path(report.instance.name).stem)
        _from_solution(g, report, sol, warm_value=None)
        return
    res = multistart_b_col(g, config.multistart(), on_progress)
    report.z, report.z_avg, report.coloring = res.best_value, res.avg_value, res.best_coloring
    report.status = "optimal" if res.proved_optimal else "heuristic"
    if mode == "msbcol" or res.proved_optimal:
        if mode != "msbcol":
            report.gap_pct = 0.0
        return
    time_left = config.time_limit - (time.perf_counter() - t0)
    if mode == "msbcol-plus":
        c, sol = mip_local_search(g, res.best_coloring, config.solver(time_left))
        report.z, report.coloring = c.num_colors, c
        if c.num_colors == m:
            report.status = "optimal"
        elif sol.status in ("feasible-time-limit", "unknown"):
            report.status = "time-limit"
        return
    warm, reps = warm_start_from_coloring(g, res.best_coloring)
    model = apply_improvement_fixing(build_formulation(g), res.best_value, reps)
    sol = solve(model, config.solver(time_left), warm, name=Path(report.instance.name).stem)
    _from_solution(g, report, sol, warm_value=res.best_value)


def _from_solution(g: Graph, report: RunReport, sol, warm_value: int | None) -> None:
    m = report.m_of_g
    if sol.has_solution or (sol.assignment is not None and warm_value is not None):
        c = build_formulation(g).decode(sol.assignment)
        report.z, report.coloring = c.num_colors, c
    bound = min(m, math.floor(sol.bound + 1e-9)) if sol.bound else m
    if sol.status == "unknown":
        report.note = "model exported; no solution file imported"
    if report.z is None:
        report.status = "time-limit"
        return
    if sol.status == "optimal" or report.z == m:
        report.status, report.gap_pct = "optimal", 0.0
    else:
        report.status = "time-limit"
        report.gap_pct = gap_percent(report.z, max(bound, report.z))


# -- benchmark harness ---------------------------------------------------------


@dataclass
class BenchResult:
    reports: list[RunReport]
    groups: list[dict]
    skipped: list[tuple[str, str]]

    @property
    def empty(self) -> bool:
        return not self.reports


def instance_files(directory: str | os.PathLike) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise NotADirectoryError(str(d))
    return sorted(p for p in d.iterdir() if p.is_file() and p.suffix.lower() in INSTANCE_SUFFIXES)


def read_manifest(path: str | os.PathLike) -> dict[str, str]:
    """``<file name> <group>`` per line; ``#`` starts a comment."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].split()
        if len(line) == 2:
            out[line[0]] = line[1]
    return out


def group_rows(reports: list[RunReport], groups: dict[str, str] | None = None) -> list[dict]:
    """Average each group over its completed (not halted) members."""
    by_group: dict[tuple[str, str], list[RunReport]] = {}
    for r in reports:
        key = ((groups or {}).get(r.instance.name, r.instance.group), r.mode)
        by_group.setdefault(key, []).append(r)
    rows = []
    for (name, mode), members in sorted(by_group.items()):
        done = [r for r in members if r.status != "halted" and r.z is not None]

        def avg(values):
            values = [v for v in values if v is not None]
            return round(sum(values) / len(values), 4) if values else None

        rows.append(
            {
                "group": name,
                "mode": mode,
                "members": len(members),
                "completed": len(done),
                "partial": len(done) < len(members),
                "|V|": avg(r.n for r in done),
                "|E|": avg(r.num_edges for r in done),
                "m": avg(r.m_of_g for r in done),
                "z": avg(r.z for r in done),
                "z_avg": avg(r.z_avg for r in done),
                "time_s": avg(r.time_s for r in done),
                "gap_pct": avg(r.gap_pct for r in done),
            }
        )
    return rows


def bench(
    directory: str | os.PathLike,
    mode: str,
    config: RunConfig = RunConfig(),
    manifest: str | os.PathLike | None = None,
) -> BenchResult:
    """Run ``mode`` on every ``.col``/``.clq`` file of ``directory`` in name order."""
    groups = read_manifest(manifest) if manifest else None
    reports, skipped = [], []
    for path in instance_files(directory):
        try:
            g, meta = read_dimacs(path)
        except (DimacsError, UnicodeDecodeError, ValueError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            skipped.append((path.name, str(exc)))
            continue
        reports.append(run_mode(g, mode, config, meta))
        log.info("%s: z=%s status=%s", path.name, reports[-1].z, reports[-1].status)
    return BenchResult(reports, group_rows(reports, groups), skipped)


def _csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row[k] is None else row[k]) for k in columns})
    return buf.getvalue()


def reports_csv(reports: list[RunReport]) -> str:
    return _csv([r.row() for r in reports], CSV_COLUMNS)


def groups_csv(groups: list[dict]) -> str:
    return _csv(groups, GROUP_COLUMNS)


def bench_json(result: BenchResult) -> str:
    doc = {
        "instances": [r.row() for r in result.reports],
        "groups": result.groups,
        "skipped": [{"file": f, "error": e} for f, e in result.skipped],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_bench(result: BenchResult, prefix: str | os.PathLike) -> list[Path]:
    """Write ``<prefix>.csv``, ``<prefix>_groups.csv`` and ``<prefix>.json``."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    paths = [Path(f"{prefix}.csv"), Path(f"{prefix}_groups.csv"), Path(f"{prefix}.json")]
    paths[0].write_text(reports_csv(result.reports))
    paths[1].write_text(groups_csv(result.groups))
    paths[2].write_text(bench_json(result))
    return paths

