"""Integer program by representatives for the b-coloring problem.

Binary ``x[u, v]`` for every ordered pair with ``v`` equal to ``u`` or not
adjacent to it: ``x[u, u] = 1`` makes ``u`` the representative (and a
b-vertex) of its own color, ``x[u, v] = 1`` gives ``v`` that color.

    max   sum_u x[u,u]
    cover     sum_{v in N̄[u]} x[v,u] = 1                    for every u
    conflict  x[u,v] + x[u,w] <= x[u,u]                       v, w in N̄(u), vw in E
    link      x[u,v] <= x[u,u]                                v in N̄*(u)
    blink     sum_{w in N(v) ∩ N̄(u)} x[u,w] >= x[u,u] + x[v,v] - 1   uv not in E, both orders

N̄*(u) keeps the anti-neighbors of ``u`` with no neighbor inside N̄(u).
Constraint rows are generated lazily; dense graphs produce a great many
conflict rows and only the LP exporter needs them all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from ..coloring import Coloring, ColoringError, b_vertices, is_b_coloring
from ..graph import Graph

Var = tuple[int, int]
Assignment = dict  # Var -> 0/1; absent variables are 0


class InfeasibleFixingError(ValueError):
    """Fixings contradict each other or exclude every solution."""


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[Var, int], ...]
    sense: str  # "=", "<=", ">="
    rhs: int

    def holds(self, x: Mapping[Var, int]) -> bool:
        lhs = sum(coef * x.get(var, 0) for var, coef in self.terms)
        if self.sense == "=":
            return lhs == self.rhs
        if self.sense == "<=":
            return lhs <= self.rhs
        return lhs >= self.rhs


FAMILIES = ("cover", "conflict", "link", "blink")


@dataclass(frozen=True)
class Model:
    graph: Graph
    variables: tuple[Var, ...]
    fixings: Mapping[Var, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.variables)})

    @property
    def index(self) -> dict[Var, int]:
        return self._index

    def has_var(self, var: Var) -> bool:
        return var in self._index

    def objective_vars(self) -> list[Var]:
        return [(u, u) for u in range(self.graph.n)]

    def objective(self, x: Mapping[Var, int]) -> int:
        return sum(x.get((u, u), 0) for u in range(self.graph.n))

    def with_fixings(self, extra: Mapping[Var, int]) -> Model:
        """Return a copy with ``extra`` fixings merged in."""
        merged = dict(self.fixings)
        for var, val in extra.items():
            if var not in self._index:
                raise KeyError(f"no variable {var}")
            if val not in (0, 1):
                raise ValueError(f"fixing value must be 0 or 1, got {val}")
            if merged.get(var, val) != val:
                raise InfeasibleFixingError(f"variable {var} fixed to both 0 and 1")
            merged[var] = val
        return Model(self.graph, self.variables, merged)

    def constraints(self, families: Iterable[str] = FAMILIES) -> Iterator[Constraint]:
        g = self.graph
        adj = g.matrix
        anti = [g.anti_neighbors(u) for u in range(g.n)]
        fams = set(families)
        if "cover" in fams:
            for u in range(g.n):
                terms = ((u, u), 1), *(((v, u), 1) for v in anti[u])
                yield Constraint(f"cover_{u + 1}", tuple(terms), "=", 1)
        if "conflict" in fams:
            for u in range(g.n):
                au = anti[u]
                for i, v in enumerate(au):
                    for w in au[i + 1 :]:
                        if adj[v, w]:
                            yield Constraint(
                                f"conflict_{u + 1}_{v + 1}_{w + 1}",
                                (((u, v), 1), ((u, w), 1), ((u, u), -1)),
                                "<=",
                                0,
                            )
        if "link" in fams:
            for u in range(g.n):
                for v in isolated_anti_neighbors(g, u):
                    yield Constraint(f"link_{u + 1}_{v + 1}", (((u, v), 1), ((u, u), -1)), "<=", 0)
        if "blink" in fams:
            for u in range(g.n):
                for v in anti[u]:
                    witnesses = [w for w in g.adjacency[v] if w != u and not adj[u, w]]
                    terms = [((u, u), 1), ((v, v), 1)] + [((u, w), -1) for w in witnesses]
                    yield Constraint(f"blink_{u + 1}_{v + 1}", tuple(terms), "<=", 1)

    def constraint_counts(self) -> dict[str, int]:
        return {fam: sum(1 for _ in self.constraints([fam])) for fam in FAMILIES}

    def fixing_violations(self, x: Mapping[Var, int]) -> list[str]:
        return [f"fix_{u + 1}_{v + 1}" for (u, v), val in self.fixings.items() if x.get((u, v), 0) != val]

    def violations(self, x: Mapping[Var, int]) -> list[str]:
        """Names of every constraint (and fixing) the assignment breaks, checked row by row."""
        bad = [f"unknown_{u + 1}_{v + 1}" for (u, v), val in x.items() if val and (u, v) not in self._index]
        bad += [c.name for c in self.constraints() if not c.holds(x)]
        bad += self.fixing_violations(x)
        return bad

    def is_feasible(self, x: Mapping[Var, int]) -> bool:
        return not self.violations(x)

    def decode(self, x: Mapping[Var, int]) -> Coloring:
        """Coloring whose color ``i`` is the class of the ``i``-th representative by vertex id."""
        g = self.graph
        reps = [u for u in range(g.n) if x.get((u, u), 0)]
        color_of = {u: i + 1 for i, u in enumerate(reps)}
        colors = [0] * g.n
        for (u, v), val in x.items():
            if val and u in color_of:
                colors[v] = color_of[u]
        return Coloring(colors)


def isolated_anti_neighbors(g: Graph, u: int) -> list[int]:
    """N̄*(u): anti-neighbors of ``u`` with no neighbor among the other anti-neighbors."""
    anti = g.anti_neighbors(u)
    if not anti:
        return []
    sub = g.matrix[list(anti)][:, list(anti)]
    return [v for v, row in zip(anti, sub) if not row.any()]


def build_formulation(g: Graph) -> Model:
    if g.n < 1:
        raise ValueError("graph has no vertices")
    variables = []
    for u in range(g.n):
        variables.append((u, u))
        variables.extend((u, v) for v in g.anti_neighbors(u))
    return Model(g, tuple(variables))


def _zero_out(model: Model, vertices: Iterable[int]) -> dict[Var, int]:
    g = model.graph
    fix: dict[Var, int] = {}
    for u in vertices:
        fix[(u, u)] = 0
        for v in g.anti_neighbors(u):
            fix[(u, v)] = 0
    return fix


def apply_lower_bound_fixing(model: Model, lb: float) -> Model:
    """Forbid representatives of degree below ceil(lb) - 1; valid for any lower bound ``lb``."""
    threshold = math.ceil(lb) - 1
    deg = model.graph.degrees
    return model.with_fixings(_zero_out(model, (u for u in range(model.graph.n) if deg[u] < threshold)))


def apply_improvement_fixing(model: Model, z_hat: float, warm_b_vertices: Iterable[int] = ()) -> Model:
    """Forbid representatives of degree below ``z_hat`` except the warm start's own ones.

    Any strictly better solution needs every representative to have degree at
    least ``z_hat``; keeping the warm representatives free leaves the warm
    start feasible.
    """
    keep = set(warm_b_vertices)
    deg = model.graph.degrees
    low = (u for u in range(model.graph.n) if u not in keep and deg[u] < z_hat)
    return model.with_fixings(_zero_out(model, low))


def representatives(g: Graph, c: Coloring) -> dict[int, int]:
    """For each color, its highest-degree b-vertex (lowest id on ties)."""
    if not is_b_coloring(g, c):
        raise ColoringError("warm start requires a b-coloring")
    deg = g.degrees
    return {k: min(vs, key=lambda v: (-deg[v], v)) for k, vs in sorted(b_vertices(g, c).items())}


def warm_start_from_coloring(g: Graph, c: Coloring) -> tuple[Assignment, set[int]]:
    """Encode a b-coloring as a model assignment; returns it with the representative set."""
    reps = representatives(g, c)
    x: Assignment = {}
    for v, k in enumerate(c.colors.tolist()):
        x[(reps[k], v)] = 1
    return x, set(reps.values())
