"""Exhaustive b-chromatic number for tiny graphs (a verification oracle).

Deliberately shares no code with the solvers it checks: colorings are
enumerated as restricted growth strings (color of vertex i is at most one
more than the largest color used before it), so each partition into color
classes is visited once.
"""

from __future__ import annotations

from ..graph import Graph

DEFAULT_CAP = 10


def _has_b_coloring(adj: list[set[int]], n: int, k: int) -> bool:
    colors = [0] * n

    def complete() -> bool:
        for col in range(1, k + 1):
            for v in range(n):
                if colors[v] == col and len({colors[w] for w in adj[v]}) == k - 1:
                    break
            else:
                return False
        return True

    def extend(i: int, used: int) -> bool:
        if n - i < k - used:
            return False  # not enough vertices left to use every color
        if i == n:
            return complete()
        for col in range(1, min(used + 1, k) + 1):
            if any(colors[w] == col for w in adj[i] if w < i):
                continue
            colors[i] = col
            if extend(i + 1, max(used, col)):
                return True
        colors[i] = 0
        return False

    return extend(0, 0)


def brute_force_chi_b(g: Graph, cap: int = DEFAULT_CAP) -> int:
    """Largest k for which ``g`` has a b-coloring with exactly k colors.

    b-colorings do not exist for every k below the maximum, so every k from
    Δ+1 down is tried until one succeeds.
    """
    if g.n > cap:
        raise ValueError(f"graph has {g.n} vertices, oracle cap is {cap}")
    if g.n == 0:
        return 0
    adj = [set(g.adjacency[v]) for v in range(g.n)]
    for k in range(g.max_degree + 1, 0, -1):
        if _has_b_coloring(adj, g.n, k):
            return k
    raise AssertionError("every graph has a 1-coloring or a proper coloring with Δ+1 colors")
