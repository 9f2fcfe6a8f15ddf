"""Colorings, color neighborhoods and b-coloring validation.

Color ``0`` means "uncolored"; real colors are ``1, 2, ...``.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Graph


class ColoringError(ValueError):
    """A coloring failed a precondition (incomplete, improper, malformed)."""


class Coloring:
    """Per-vertex color assignment."""

    def __init__(self, colors: Iterable[int]):
        self.colors = np.array(list(colors) if not isinstance(colors, np.ndarray) else colors, dtype=np.int64)
        if self.colors.ndim != 1:
            raise ColoringError("colors must be a flat sequence")
        if (self.colors < 0).any():
            raise ColoringError("colors must be non-negative")

    @classmethod
    def uncolored(cls, n: int) -> Coloring:
        return cls(np.zeros(n, dtype=np.int64))

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return int(self.colors[v])

    def __eq__(self, other) -> bool:
        return isinstance(other, Coloring) and np.array_equal(self.colors, other.colors)

    def __repr__(self) -> str:
        return f"Coloring({self.colors.tolist()})"

    @property
    def used_colors(self) -> set[int]:
        return {int(k) for k in np.unique(self.colors) if k != 0}

    @property
    def num_colors(self) -> int:
        return len(self.used_colors)

    def is_complete(self) -> bool:
        return bool((self.colors > 0).all())

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, k in enumerate(self.colors.tolist()):
            if k:
                out.setdefault(k, []).append(v)
        return out

    def normalized(self) -> Coloring:
        """Relabel the used colors to ``1..k`` preserving their order."""
        used = sorted(self.used_colors)
        lut = np.zeros(int(self.colors.max(initial=0)) + 1, dtype=np.int64)
        lut[used] = np.arange(1, len(used) + 1)
        return Coloring(lut[self.colors])

    def copy(self) -> Coloring:
        return Coloring(self.colors.copy())


class ColorNeighborhoods:
    """Color neighborhoods N_c(v) with their sizes d_c(v).

    ``counts[v, k]`` is the number of neighbors of ``v`` colored ``k``; color
    ``k`` is in N_c(v) iff that count is positive.  ``color_degree[v]`` caches
    |N_c(v)| so the b-vertex test is a single comparison.
    """

    def __init__(self, counts: np.ndarray):
        self.counts = counts
        self.color_degree = (counts[:, 1:] > 0).sum(axis=1).astype(np.int64)

    def marked(self, v: int) -> set[int]:
        return {int(k) for k in np.nonzero(self.counts[v])[0] if k != 0}

    def contains(self, v: int, k: int) -> bool:
        return k < self.counts.shape[1] and self.counts[v, k] > 0

    def indicator(self) -> np.ndarray:
        """Boolean matrix of marked colors; column 0 is never marked."""
        ind = self.counts > 0
        ind[:, 0] = False
        return ind

    def same_as(self, other: ColorNeighborhoods) -> bool:
        a, b = self.indicator(), other.indicator()
        width = max(a.shape[1], b.shape[1])
        a = np.pad(a, ((0, 0), (0, width - a.shape[1])))
        b = np.pad(b, ((0, 0), (0, width - b.shape[1])))
        return bool(np.array_equal(a, b) and np.array_equal(self.color_degree, other.color_degree))


def rebuild_neighborhoods(g: Graph, c: Coloring, num_colors: int | None = None) -> ColorNeighborhoods:
    """Compute color neighborhoods from scratch; partial colorings are fine."""
    width = max(int(c.colors.max(initial=0)), g.max_degree + 1, num_colors or 0) + 1
    counts = np.zeros((g.n, width), dtype=np.int64)
    for u, v in g.edges():
        counts[u, c.colors[v]] += 1
        counts[v, c.colors[u]] += 1
    counts[:, 0] = 0
    return ColorNeighborhoods(counts)


def is_proper(g: Graph, c: Coloring) -> bool:
    """True iff no edge joins two vertices of the same color."""
    _require_complete(g, c)
    return all(c.colors[u] != c.colors[v] for u, v in g.edges())


def b_vertices(g: Graph, c: Coloring) -> dict[int, set[int]]:
    """Map each used color to the set of its b-vertices (possibly empty)."""
    if not is_proper(g, c):
        raise ColoringError("coloring is not proper")
    used = c.used_colors
    out: dict[int, set[int]] = {k: set() for k in used}
    for v in range(g.n):
        k = int(c.colors[v])
        seen = {int(c.colors[u]) for u in g.adjacency[v]}
        if used - {k} <= seen:
            out[k].add(v)
    return out


def is_b_coloring(g: Graph, c: Coloring) -> bool:
    """True iff ``c`` is proper and every used color has a b-vertex."""
    _require_complete(g, c)
    if not is_proper(g, c):
        return False
    return all(b_vertices(g, c).values())


def _require_complete(g: Graph, c: Coloring) -> None:
    if len(c) != g.n:
        raise ColoringError(f"coloring has {len(c)} entries for a graph on {g.n} vertices")
    if not c.is_complete():
        raise ColoringError("coloring is incomplete")


def format_coloring(c: Coloring) -> str:
    """Text form: ``colors <k>`` header, then ``<vertex> <color>`` per line, 1-indexed vertices."""
    lines = [f"colors {c.num_colors}"]
    lines.extend(f"{v + 1} {int(k)}" for v, k in enumerate(c.colors))
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, n: int | None = None) -> Coloring:
    declared = None
    pairs: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "colors":
            declared = int(parts[1])
            continue
        if len(parts) != 2:
            raise ColoringError(f"line {lineno}: expected '<vertex> <color>'")
        v, k = int(parts[0]), int(parts[1])
        if v < 1 or (n is not None and v > n):
            raise ColoringError(f"line {lineno}: vertex {v} out of range")
        if v in pairs:
            raise ColoringError(f"line {lineno}: vertex {v} colored twice")
        pairs[v] = k
    size = n if n is not None else max(pairs, default=0)
    colors = np.zeros(size, dtype=np.int64)
    for v, k in pairs.items():
        colors[v - 1] = k
    c = Coloring(colors)
    if declared is not None and declared != c.num_colors:
        raise ColoringError(f"header declares {declared} colors but {c.num_colors} are used")
    return c


def read_coloring(path: str | os.PathLike, n: int | None = None) -> Coloring:
    return parse_coloring(Path(path).read_text(), n)


def write_coloring(path: str | os.PathLike, c: Coloring) -> None:
    Path(path).write_text(format_coloring(c))
