"""Immutable simple undirected graphs and the structural bounds used by the solvers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph input or degenerate graphs."""


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    The adjacency lists are sorted tuples and never change after
    construction, so a graph can be shared freely between workers.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self.degrees = np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=n)
        self.degrees.setflags(write=False)
        self.num_edges = int(self.degrees.sum()) // 2

    @classmethod
    def from_adjacency_matrix(cls, matrix) -> Graph:
        a = np.asarray(matrix, dtype=bool)
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], zip(iu.tolist(), ju.tolist()))

    @classmethod
    def from_networkx(cls, nxg) -> Graph:
        nodes = sorted(nxg.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), ((index[u], index[v]) for u, v in nxg.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    def __getstate__(self):
        return {"n": self.n, "edges": self.edge_list()}

    def __setstate__(self, state):
        self.__init__(state["n"], state["edges"])

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.matrix[u, v])

    def edges(self) -> Iterable[tuple[int, int]]:
        """Yield every edge once as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, nb in enumerate(self.adjacency):
            for v in nb:
                if v > u:
                    yield (u, v)

    def edge_list(self) -> list[tuple[int, int]]:
        return list(self.edges())

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix (read-only)."""
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, nb in enumerate(self.adjacency):
            a[u, list(nb)] = True
        a.setflags(write=False)
        return a

    @cached_property
    def neighbor_arrays(self) -> tuple[np.ndarray, ...]:
        return tuple(np.asarray(nb, dtype=np.intp) for nb in self.adjacency)

    def anti_neighbors(self, v: int) -> tuple[int, ...]:
        """Vertices neither adjacent nor equal to ``v``, in increasing order."""
        row = self.matrix[v]
        return tuple(u for u in range(self.n) if u != v and not row[u])

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


@dataclass(frozen=True)
class InstanceMeta:
    name: str
    source: str = "generated"  # dimacs-col | dimacs-clq | generated
    generator: dict | None = None

    def __post_init__(self):
        if self.source not in ("dimacs-col", "dimacs-clq", "generated"):
            raise ValueError(f"unknown instance source {self.source!r}")
        if (self.generator is not None) != (self.source == "generated"):
            raise ValueError("generator parameters are required exactly for generated instances")

    @property
    def group(self) -> str:
        """Instance group ``C_n_p`` for generated instances, else the instance name."""
        if self.generator is None:
            return self.name
        prefix = {"random": "rand", "bipartite": "bip", "geometric": "geo"}[self.generator["class"]]
        return f"{prefix}_{self.generator['n']}_{self.generator['p']}"


def m_bound(g: Graph) -> int:
    """Upper bound m(G) = max{i : d(v_i) >= i - 1} over degrees sorted nonincreasingly."""
    if g.n < 1:
        raise GraphError("m(G) needs at least one vertex")
    d = np.sort(g.degrees)[::-1]
    i = np.arange(1, g.n + 1)
    return int(i[d >= i - 1].max())


def density(g: Graph) -> float:
    """Edge density 2|E| / (|V| (|V| - 1))."""
    if g.n < 2:
        raise GraphError("density is undefined for graphs with fewer than two vertices")
    return 2.0 * g.num_edges / (g.n * (g.n - 1))


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and leaves ``1..leaves``."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph(offset, edges)
