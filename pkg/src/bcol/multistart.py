"""Multi-start driver: repeated seeded constructive runs with best-solution tracking.

Iteration ``i`` (0-based) draws from its own stream,
``np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))``,
so the set of iterates does not depend on how many workers run them.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coloring import Coloring, is_b_coloring
from .constructive import RclParams, randomized_constructive, round_half_up
from .graph import Graph, density, m_bound

EDGELESS_IT_MAX = 1100


def iteration_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))


def default_it_max(g: Graph) -> int:
    """100 + round(1000 / (sqrt(|V|) sqrt(p(G)))); edgeless graphs get 1100."""
    p = density(g)
    if p == 0:
        return EDGELESS_IT_MAX
    return 100 + round_half_up(1000.0 / (math.sqrt(g.n) * math.sqrt(p)))


@dataclass(frozen=True)
class MultistartConfig:
    rcl: RclParams = RclParams()
    it_max: int | None = None  # None: default_it_max(g)
    seed: int = 0
    workers: int = 1
    time_budget: float | None = None
    early_exit: bool = True

    def __post_init__(self):
        if self.it_max is not None and self.it_max < 1:
            raise ValueError("it_max must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class ProgressEvent:
    iteration: int
    value: int
    new_best: bool
    timestamp: float

    def __str__(self) -> str:
        return f"{self.iteration} {self.value} {int(self.new_best)} {self.timestamp:.6f}"


@dataclass
class MultistartResult:
    best_coloring: Coloring
    best_value: int
    avg_value: float
    iterations_run: int
    elapsed: float
    proved_optimal: bool
    values: list[int]  # per-iteration values, indexed by iteration

    @property
    def best_iteration(self) -> int:
        return self.values.index(self.best_value)


def _run_one(g: Graph, alpha: float, beta: float, seed: int, i: int) -> tuple[int, np.ndarray]:
    c, used = randomized_constructive(g, alpha, beta, iteration_rng(seed, i))
    return len(used), c.colors


_worker_graph: Graph | None = None


def _init_worker(g: Graph) -> None:
    global _worker_graph
    _worker_graph = g


def _run_in_worker(alpha: float, beta: float, seed: int, i: int) -> tuple[int, int, np.ndarray]:
    value, colors = _run_one(_worker_graph, alpha, beta, seed, i)
    return i, value, colors


def multistart_b_col(
    g: Graph,
    cfg: MultistartConfig = MultistartConfig(),
    on_progress: Callable[[ProgressEvent], None] | None = None,
) -> MultistartResult:
    """Best b-coloring over ``it_max`` randomized constructive runs.

    Stops early once an iterate reaches m(G) (unless ``cfg.early_exit`` is
    off) or the time budget is spent; iterations already running finish and
    are counted.
    """
    m = m_bound(g)
    it_max = cfg.it_max if cfg.it_max is not None else (default_it_max(g) if g.n >= 2 else 1)
    alpha, beta = cfg.rcl.alpha, cfg.rcl.beta
    t0 = time.perf_counter()
    results: dict[int, tuple[int, np.ndarray]] = {}
    best = [0, -1]  # value, iteration

    def record(i: int, value: int, colors: np.ndarray) -> bool:
        results[i] = (value, colors)
        improved = value > best[0] or (value == best[0] and i < best[1])
        new_best = value > best[0]
        if improved:
            best[0], best[1] = value, i
        if on_progress is not None:
            on_progress(ProgressEvent(i, value, new_best, time.perf_counter() - t0))
        return cfg.early_exit and best[0] >= m

    def out_of_time() -> bool:
        return cfg.time_budget is not None and time.perf_counter() - t0 >= cfg.time_budget

    if cfg.workers == 1:
        for i in range(it_max):
            if record(i, *_run_one(g, alpha, beta, cfg.seed, i)) or out_of_time():
                break
    else:
        with ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(g,)) as pool:
            pending = set()
            next_i = 0
            stop = False
            while True:
                while not stop and next_i < it_max and len(pending) < cfg.workers:
                    pending.add(pool.submit(_run_in_worker, alpha, beta, cfg.seed, next_i))
                    next_i += 1
                if not pending:
                    break
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in sorted(done, key=lambda f: f.result()[0]):
                    if record(*fut.result()):
                        stop = True
                stop = stop or out_of_time()

    values = [results[i][0] for i in sorted(results)]
    best_value, best_i = best
    coloring = Coloring(results[best_i][1])
    return MultistartResult(
        best_coloring=coloring,
        best_value=best_value,
        avg_value=float(np.mean(values)),
        iterations_run=len(values),
        elapsed=time.perf_counter() - t0,
        proved_optimal=best_value == m,
        values=values,
    )


def validate_result(g: Graph, res: MultistartResult) -> None:
    """Raise AssertionError if the result breaks its documented invariants."""
    assert is_b_coloring(g, res.best_coloring)
    assert res.best_coloring.num_colors == res.best_value
    assert res.best_value >= max(res.values)
    assert res.best_value >= res.avg_value
    assert res.best_value <= m_bound(g)
    if res.proved_optimal:
        assert res.best_value == m_bound(g)


def default_workers() -> int:
    return os.cpu_count() or 1
