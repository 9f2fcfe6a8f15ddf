"""Seeded instance generators.

All random generators draw from numpy's PCG64 bit generator seeded with the
integer ``seed`` (``np.random.Generator(np.random.PCG64(seed))``), so an
instance is fully determined by its parameters and seed:

* random: one uniform draw per vertex pair ``(i, j)``, ``i < j``, in
  lexicographic order; the pair is an edge iff the draw is ``< p``.
* bipartite: parts ``0..ceil(n/2)-1`` and the rest; one draw per cross pair in
  row-major order, edge iff ``< p``.
* geometric: ``n`` points drawn as an ``(n, 2)`` array of uniforms in the unit
  square; edge iff the euclidean distance is ``<= d``.

The two deterministic families at the bottom rebuild published DIMACS
clique benchmarks from their construction rules.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .graph import Graph, InstanceMeta


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")


def generate_random(n: int, p: float, seed: int) -> Graph:
    """G(n, p) random graph."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_prob(p)
    iu, ju = np.triu_indices(n, 1)
    keep = _rng(seed).random(iu.size) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def generate_bipartite(n: int, p: float, seed: int) -> Graph:
    """Random bipartite graph with parts of sizes ceil(n/2) and floor(n/2)."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_prob(p)
    a = (n + 1) // 2
    b = n - a
    draws = _rng(seed).random((a, b)) < p
    ii, jj = np.nonzero(draws)
    return Graph(n, zip(ii.tolist(), (jj + a).tolist()))


def generate_geometric(n: int, d: float, seed: int) -> Graph:
    """Random geometric graph on uniform points in the unit square."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= d <= math.sqrt(2) + 1e-12:
        raise ValueError(f"distance threshold must lie in [0, sqrt(2)], got {d}")
    pts = _rng(seed).random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    close = (diff**2).sum(axis=-1) <= d * d
    iu, ju = np.triu_indices(n, 1)
    keep = close[iu, ju]
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


GENERATORS = {
    "random": generate_random,
    "bipartite": generate_bipartite,
    "geometric": generate_geometric,
}


def generate(kind: str, n: int, p: float, seed: int) -> tuple[Graph, InstanceMeta]:
    """Generate an instance and its metadata, e.g. ``generate("bipartite", 50, 0.2, 1)``."""
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown graph class {kind!r}; expected one of {sorted(GENERATORS)}") from None
    g = fn(n, p, seed)
    meta = InstanceMeta(
        f"{kind}_{n}_{p}_s{seed}", "generated", {"class": kind, "n": n, "p": p, "seed": seed}
    )
    return g, meta


def c_fat(n: int, c: float) -> Graph:
    """The ``c-fat<n>-<c>`` clique benchmark.

    Vertices are split into ``floor(n / (c ln n))`` consecutive groups whose
    sizes differ by at most one (larger groups first).  Each group is a
    clique and is completely joined to the two cyclically adjacent groups.
    """
    groups = int(n / (c * math.log(n)))
    if groups < 3:
        raise ValueError("construction needs at least three groups")
    q, r = divmod(n, groups)
    sizes = [q + 1] * r + [q] * (groups - r)
    starts = np.concatenate(([0], np.cumsum(sizes)))
    members = [range(starts[i], starts[i + 1]) for i in range(groups)]
    edges = []
    for i in range(groups):
        edges.extend(itertools.combinations(members[i], 2))
        edges.extend(itertools.product(members[i], members[(i + 1) % groups]))
    return Graph(n, edges)


def mann_a9() -> Graph:
    """``MANN_a9``: clique formulation of the Steiner triple covering problem on 9 points.

    Vertices ``0..8`` stand for the points and ``9 + 3t + j`` for the ``j``-th
    point of triple ``t`` of the affine plane AG(2, 3).  Two vertices are
    adjacent unless they belong to the same triple, or one is a point and the
    other an occurrence of that same point.
    """
    pts = [(a, b) for a in range(3) for b in range(3)]
    idx = {p: i for i, p in enumerate(pts)}
    lines = set()
    for p, q in itertools.combinations(pts, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        lines.add(tuple(sorted((idx[p], idx[q], idx[r]))))
    n = 9 + 3 * len(lines)
    conflict = np.zeros((n, n), dtype=bool)
    for t, line in enumerate(sorted(lines)):
        occ = [9 + 3 * t + j for j in range(3)]
        for a, b in itertools.combinations(occ, 2):
            conflict[a, b] = conflict[b, a] = True
        for j, point in enumerate(line):
            conflict[occ[j], point] = conflict[point, occ[j]] = True
    adj = ~conflict
    np.fill_diagonal(adj, False)
    return Graph.from_adjacency_matrix(adj)
