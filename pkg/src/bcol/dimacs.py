"""DIMACS ASCII graph format (``.col`` / ``.clq``).

Files are 1-indexed on disk; graphs are 0-indexed in memory.  Duplicate
and reversed ``e`` lines collapse into one undirected edge.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

from .graph import Graph, GraphError, InstanceMeta


class DimacsError(GraphError):
    pass


_GEN_COMMENT = re.compile(r"^c\s+generator\s+(.*)$")


def parse_dimacs(text: str | bytes) -> Graph:
    """Parse DIMACS text into a :class:`Graph`."""
    graph, _ = _parse(text)
    return graph


def _parse(text: str | bytes) -> tuple[Graph, dict | None]:
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    n = None
    edges = []
    generator = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tag = line[0]
        if tag == "c":
            m = _GEN_COMMENT.match(line)
            if m:
                generator = _parse_generator_fields(m.group(1))
            continue
        parts = line.split()
        if tag == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(parts) < 4 or parts[1] not in ("edge", "edges", "col"):
                raise DimacsError(f"line {lineno}: malformed problem line {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed problem line {line!r}") from None
            if n < 0:
                raise DimacsError(f"line {lineno}: negative vertex count")
        elif tag == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge line before problem line")
            if len(parts) < 3:
                raise DimacsError(f"line {lineno}: malformed edge line {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed edge line {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"line {lineno}: endpoint out of range [1, {n}]")
            if u == v:
                raise DimacsError(f"line {lineno}: self-loop on vertex {u}")
            edges.append((u - 1, v - 1))
        # other DIMACS line types (n, x, ...) carry nothing we use
    if n is None:
        raise DimacsError("missing problem line")
    return Graph(n, edges), generator


def _parse_generator_fields(s: str) -> dict:
    fields = dict(tok.split("=", 1) for tok in s.split() if "=" in tok)
    out = {"class": fields.get("class")}
    for key, conv in (("n", int), ("p", float), ("seed", int)):
        if key in fields:
            out[key] = conv(fields[key])
    return out


def write_dimacs(g: Graph, meta: InstanceMeta | None = None) -> str:
    """Render ``g`` as DIMACS text; each edge is written once with ``u < v``."""
    lines = []
    if meta is not None:
        lines.append(f"c instance {meta.name}")
        if meta.generator is not None:
            gen = meta.generator
            lines.append(
                f"c generator class={gen['class']} n={gen['n']} p={gen['p']} seed={gen['seed']}"
            )
    lines.append(f"p edge {g.n} {g.num_edges}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_dimacs(path: str | os.PathLike) -> tuple[Graph, InstanceMeta]:
    """Read a DIMACS file, inferring instance metadata from its name and comments."""
    path = Path(path)
    graph, generator = _parse(path.read_bytes())
    if generator is not None and generator.get("class"):
        meta = InstanceMeta(path.name, "generated", generator)
    else:
        source = "dimacs-clq" if path.suffix.lower() == ".clq" else "dimacs-col"
        meta = InstanceMeta(path.name, source)
    return graph, meta


def save_dimacs(path: str | os.PathLike, g: Graph, meta: InstanceMeta | None = None) -> None:
    Path(path).write_text(write_dimacs(g, meta))
