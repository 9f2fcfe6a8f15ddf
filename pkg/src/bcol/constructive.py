"""Multi-greedy randomized constructive heuristic for b-coloring.

Two phases: ``initial_coloring`` grows a proper coloring outward from the
highest-degree vertex using up to Δ+1 colors, then ``find_b_coloring``
removes colors that lack a b-vertex, recoloring their vertices, until every
remaining color has one.

Random draws come from a ``numpy.random.Generator`` and are consumed in this
order: one draw per restricted-candidate-list pick that has more than one
member (a list of one is taken without drawing), and in the second phase one
coin per recolored vertex (``rng.random() < 0.5`` selects the ζ criterion,
otherwise the M* criterion) before that vertex's pick.  Picks map a draw to
position ``rng.integers(len(rcl))`` in the documented candidate order.
"""

from __future__ import annotations

import logging
import math
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence, TypeVar

import numpy as np

from .coloring import Coloring, ColorNeighborhoods, rebuild_neighborhoods
from .graph import Graph, m_bound

log = logging.getLogger(__name__)

T = TypeVar("T")


class InvariantError(RuntimeError):
    """An internal invariant of the heuristic was violated."""


@dataclass(frozen=True)
class RclParams:
    alpha: float = 0.0
    beta: float = 0.10

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")


def round_half_up(x: float) -> int:
    """Round to nearest integer, halves away from zero."""
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


def rcl_interval(candidates: Sequence[T], score: Callable[[T], float], alpha: float) -> list[T]:
    """Candidates whose score lies in ``[best - alpha * (best - worst), best]`` (maximizing)."""
    if not candidates:
        raise InvariantError("restricted candidate list built from no candidates")
    scores = [score(c) for c in candidates]
    hi, lo = max(scores), min(scores)
    threshold = hi - alpha * (hi - lo)
    return [c for c, s in zip(candidates, scores) if s >= threshold]


def rcl_cardinality(candidates: Sequence[T], rank: Callable[[T], Hashable], beta: float) -> list[T]:
    """The ``max(1, round(beta * len))`` best candidates, best meaning smallest ``rank``."""
    if not candidates:
        raise InvariantError("restricted candidate list built from no candidates")
    size = max(1, round_half_up(beta * len(candidates)))
    return sorted(candidates, key=rank)[:size]


def _pick(rng: np.random.Generator, k: int) -> int:
    return 0 if k == 1 else int(rng.integers(k))


@dataclass
class HeuristicState:
    """Working structures shared by both phases.

    ``counts[v, k]`` counts neighbors of ``v`` with color ``k`` (columns
    ``0..Δ+1``); ``color_degree[v]`` is |N_c(v)|.  ``used`` and ``k_m`` are
    indicator vectors over colors.  ``queue`` holds ``(-degree, vertex)``
    keys of colored vertices whose neighborhoods are not yet explored.
    """

    graph: Graph
    rng: np.random.Generator
    colors: np.ndarray
    counts: np.ndarray
    color_degree: np.ndarray
    used: np.ndarray
    k_m: np.ndarray
    m: int
    num_used: int = 0
    k_b: set[int] = field(default_factory=set)
    queue: list[tuple[int, int]] = field(default_factory=list)
    check: bool = False

    @classmethod
    def empty(cls, g: Graph, rng: np.random.Generator, check: bool = False) -> HeuristicState:
        width = g.max_degree + 2
        return cls(
            graph=g,
            rng=rng,
            colors=np.zeros(g.n, dtype=np.int64),
            counts=np.zeros((g.n, width), dtype=np.int64),
            color_degree=np.zeros(g.n, dtype=np.int64),
            used=np.zeros(width, dtype=bool),
            k_m=np.zeros(width, dtype=bool),
            m=m_bound(g),
            check=check,
        )

    @property
    def k_c(self) -> set[int]:
        return {int(k) for k in np.nonzero(self.used)[0]}

    @property
    def coloring(self) -> Coloring:
        return Coloring(self.colors.copy())

    @property
    def neighborhoods(self) -> ColorNeighborhoods:
        return ColorNeighborhoods(self.counts.copy())

    def assign(self, u: int, k: int) -> None:
        """Color an uncolored vertex and update N_c, K_c and K_m."""
        nb = self.graph.neighbor_arrays[u]
        col = self.counts[nb, k]
        self.color_degree[nb[col == 0]] += 1
        self.counts[nb, k] = col + 1
        self.colors[u] = k
        if not self.used[k]:
            self.used[k] = True
            self.num_used += 1
        if self.graph.degrees[u] >= self.m - 1:
            self.k_m[k] = True
        log.debug("color %d %d", u, k)
        if self.check:
            self.verify()

    def recolor(self, v: int, k: int) -> None:
        """Move ``v`` to color ``k``; K_c is left for the caller to maintain."""
        old = int(self.colors[v])
        nb = self.graph.neighbor_arrays[v]
        col = self.counts[nb, old] - 1
        self.counts[nb, old] = col
        self.color_degree[nb[col == 0]] -= 1
        col = self.counts[nb, k]
        self.color_degree[nb[col == 0]] += 1
        self.counts[nb, k] = col + 1
        self.colors[v] = k
        log.debug("recolor %d %d %d", v, old, k)
        if self.check:
            self.verify()
            for u in nb:
                if self.colors[u] == k:
                    raise InvariantError(f"recoloring {v} to {k} clashes with neighbor {u}")

    def verify(self) -> None:
        """Compare the incremental neighborhoods with a full rebuild."""
        fresh = rebuild_neighborhoods(self.graph, Coloring(self.colors), self.counts.shape[1] - 1)
        if not ColorNeighborhoods(self.counts).same_as(fresh):
            raise InvariantError("incremental color neighborhoods diverged from rebuild")
        if not np.array_equal(self.color_degree, fresh.color_degree):
            raise InvariantError("cached color degrees diverged from rebuild")


def heuristic_color_vertex(g: Graph, v: int, u: int, state: HeuristicState) -> int:
    """Color for ``u`` (uncolored) reached from ``v`` (colored, or ``u`` itself).

    Returns the lowest color of the first non-empty tier: colors absent from
    both color neighborhoods and from K_m (only when ``d(u) >= m(G) - 1``),
    then colors absent from both neighborhoods, then colors absent from
    N_c(u).  The last tier is never empty because only Δ+1 colors exist.
    """
    free_u = state.counts[u, 1:] == 0
    free_both = free_u & (state.counts[v, 1:] == 0)
    if g.degrees[u] >= state.m - 1:
        tier = free_both & ~state.k_m[1:]
        if tier.any():
            return int(tier.argmax()) + 1
    if free_both.any():
        return int(free_both.argmax()) + 1
    if not free_u.any():
        raise InvariantError(f"no color available for vertex {u}")
    return int(free_u.argmax()) + 1


def _interval_prefix(keys: list[tuple[int, int]], alpha: float) -> int:
    """Length of the prefix of ``keys`` (sorted by -degree) inside the α-interval."""
    hi, lo = -keys[0][0], -keys[-1][0]
    threshold = hi - alpha * (hi - lo)
    return bisect_right(keys, (-threshold, math.inf))


def initial_coloring(
    g: Graph, alpha: float, rng: np.random.Generator, check: bool = False
) -> HeuristicState:
    """First phase: a complete proper coloring with at most Δ+1 colors."""
    if g.n < 1:
        raise ValueError("graph has no vertices")
    state = HeuristicState.empty(g, rng, check)
    deg = g.degrees
    by_degree = sorted(range(g.n), key=lambda w: (-deg[w], w))
    cursor = 0

    start = by_degree[0]
    state.assign(start, 1)
    queue = state.queue
    queue.append((-int(deg[start]), start))
    colors = state.colors
    while True:
        while queue:
            key = queue[_pick(rng, _interval_prefix(queue, alpha))]
            v = key[1]
            pending = sorted((-int(deg[w]), w) for w in g.adjacency[v] if colors[w] == 0)
            while pending:
                u = pending.pop(_pick(rng, _interval_prefix(pending, alpha)))[1]
                state.assign(u, heuristic_color_vertex(g, v, u, state))
                insort(queue, (-int(deg[u]), u))
            del queue[bisect_right(queue, key) - 1]
        while cursor < g.n and colors[by_degree[cursor]] != 0:
            cursor += 1
        if cursor == g.n:
            break
        # next connected component: seed it with its highest-degree vertex
        u = by_degree[cursor]
        state.assign(u, heuristic_color_vertex(g, u, u, state))
        queue.append((-int(deg[u]), u))

    full = state.color_degree == state.num_used - 1
    state.k_b = {int(k) for k in np.unique(colors[full])}
    return state


def zeta(r: int, v: int, state: HeuristicState) -> int:
    """Number of neighbors of ``v`` whose color neighborhood lacks ``r``."""
    nb = state.graph.neighbor_arrays[v]
    return int((state.counts[nb, r] == 0).sum())


def m_star_colors(v: int, candidates: Sequence[int], state: HeuristicState) -> list[int]:
    """Smallest non-empty M_uv over neighbors ``u`` of ``v`` (lowest ``u`` on ties).

    M_uv is the set of candidate colors missing from N_c(u).  Returns an empty
    list when every M_uv is empty.
    """
    nb = state.graph.neighbor_arrays[v]
    if len(nb) == 0 or len(candidates) == 0:
        return []
    cand = np.asarray(candidates, dtype=np.intp)
    missing = state.counts[np.ix_(nb, cand)] == 0
    sizes = missing.sum(axis=1)
    sizes[sizes == 0] = np.iinfo(sizes.dtype).max
    row = int(sizes.argmin())
    return [int(k) for k in cand[missing[row]]]


def _recolor_choice(v: int, cand: np.ndarray, alpha: float, beta: float, state: HeuristicState) -> int:
    rng = state.rng
    nb = state.graph.neighbor_arrays[v]
    missing = state.counts[np.ix_(nb, cand)] == 0
    if rng.random() < 0.5:
        # p4: α-interval on ζ, the number of neighbors that would gain the color
        z = missing.sum(axis=0)
        if len(z) == 0:
            rcl = cand
        else:
            hi, lo = z.max(), z.min()
            rcl = cand[z >= hi - alpha * (hi - lo)]
        return int(rcl[_pick(rng, len(rcl))])
    # p5: β best (lowest index) colors of M*
    sizes = missing.sum(axis=1)
    if len(sizes) == 0 or sizes.max() == 0:
        return int(cand[0])
    sizes[sizes == 0] = np.iinfo(sizes.dtype).max
    m_star = cand[missing[int(sizes.argmin())]]
    size = max(1, round_half_up(beta * len(m_star)))
    return int(m_star[_pick(rng, size)])


def find_b_coloring(
    g: Graph, alpha: float, beta: float, state: HeuristicState
) -> tuple[Coloring, set[int]]:
    """Second phase: drop colors without b-vertices until a b-coloring remains."""
    rng = state.rng
    colors = state.colors
    kbar = state.k_c - state.k_b
    while kbar:
        ranked = sorted(kbar, reverse=True)
        size = max(1, round_half_up(beta * len(ranked)))
        r = ranked[_pick(rng, size)]
        log.debug("remove %d", r)
        state.used[r] = False  # r is excluded from every recolor candidate set
        for v in np.nonzero(colors == r)[0].tolist():
            avail = state.used & (state.counts[v] == 0)
            cand = np.nonzero(avail)[0]
            if len(cand) == 0:
                raise InvariantError(f"vertex {v} of color {r} has no recolor candidate")
            state.recolor(v, _recolor_choice(v, cand, alpha, beta, state))
        state.num_used -= 1
        kbar.discard(r)
        if kbar:
            in_kbar = np.isin(colors, list(kbar))
            done = in_kbar & (state.color_degree == state.num_used - 1)
            kbar.difference_update(int(k) for k in np.unique(colors[done]))
    return state.coloring, state.k_c


def randomized_constructive(
    g: Graph, alpha: float, beta: float, rng: np.random.Generator, check: bool = False
) -> tuple[Coloring, set[int]]:
    """One run of the two-phase heuristic; returns a b-coloring and its color set."""
    state = initial_coloring(g, alpha, rng, check)
    return find_b_coloring(g, alpha, beta, state)
