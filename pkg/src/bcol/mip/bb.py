"""Combinatorial branch-and-bound for the representatives model.

The outer search enumerates representative sets in the subset tree over the
free candidates, taken in nonincreasing degree order, adding larger sets
first.  A node is pruned when its degree bound

    max k  such that  k <= |R| + #{free compatible candidates c : d(c) >= k - 1}
                      and  k <= min_{r in R} d(r) + 1

cannot beat the incumbent, or when two representatives can no longer see
each other's colors (every possible witness has become a representative
itself).  Each set larger than the incumbent is tested by a small constraint
solver that assigns every other vertex to a representative (the cover,
conflict and link rows) while keeping each representative's b-vertex
requirements satisfiable (the blink rows).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .model import Assignment, InfeasibleFixingError, Model


class _TimeUp(Exception):
    pass


@dataclass
class BBResult:
    assignment: Assignment | None
    objective: int
    bound: int
    complete: bool
    nodes: int
    csp_calls: int


class _Fixed:
    """Fixings digested into per-vertex rules."""

    def __init__(self, model: Model):
        g = model.graph
        n = g.n
        self.forced_rep = set()
        self.no_rep = set()
        self.forced_owner: dict[int, int] = {}
        self.banned = np.zeros((n, n), dtype=bool)  # banned[u, v]: v may not take u's color
        for (u, v), val in model.fixings.items():
            if u == v:
                (self.forced_rep if val else self.no_rep).add(u)
            elif val:
                if self.forced_owner.get(v, u) != u:
                    raise InfeasibleFixingError(f"vertex {v} forced into two color classes")
                self.forced_owner[v] = u
            else:
                self.banned[u, v] = True
        for v, u in self.forced_owner.items():
            if u in self.no_rep:
                raise InfeasibleFixingError(f"vertex {v} forced to follow non-representative {u}")
            if v in self.forced_rep:
                raise InfeasibleFixingError(f"representative {v} forced into the class of {u}")
            self.forced_rep.add(u)
        members: dict[int, list[int]] = {}
        for v, u in self.forced_owner.items():
            members.setdefault(u, []).append(v)
        adj = g.matrix
        for u, vs in members.items():
            for i, v in enumerate(vs):
                for w in vs[i + 1 :]:
                    if adj[v, w]:
                        raise InfeasibleFixingError(f"adjacent vertices {v} and {w} both forced into the class of {u}")
        if self.forced_rep & self.no_rep:
            raise InfeasibleFixingError("a vertex is both forced and forbidden as representative")
        for u in self.no_rep:
            self.banned[u, :] = True


class _Csp:
    """Assign every non-representative to a representative's color."""

    def __init__(self, model: Model, fixed: _Fixed, reps: list[int], deadline: float):
        g = model.graph
        n, k = g.n, len(reps)
        self.g, self.n, self.k = g, n, k
        self.deadline = deadline
        self.reps = reps
        adj = g.matrix
        self.adj_f = adj.astype(np.float64)
        rep_arr = np.asarray(reps, dtype=np.intp)
        dom = ~adj[rep_arr].T & ~fixed.banned[rep_arr].T  # n x k
        is_rep = np.zeros(n, dtype=bool)
        is_rep[rep_arr] = True
        dom[is_rep] = False
        dom[rep_arr, np.arange(k)] = True
        for v, u in fixed.forced_owner.items():
            if not is_rep[v]:
                keep = dom[v, reps.index(u)] if u in reps else False
                dom[v] = False
                if keep:
                    dom[v, reps.index(u)] = True
        # rep r needs every non-adjacent rep's color among its neighbors
        need = np.zeros((n, k), dtype=bool)
        need[rep_arr] = ~adj[np.ix_(rep_arr, rep_arr)]
        need[rep_arr, np.arange(k)] = False
        self.need = need
        self.dom0 = dom
        self.assigned0 = is_rep.copy()
        self.steps = 0

    def solve(self) -> np.ndarray | None:
        state = self._propagate(self.dom0.copy(), self.assigned0.copy(), list(np.nonzero(self.assigned0)[0]))
        if state is None:
            return None
        return self._search(*state)

    def _propagate(self, dom, assigned, newly):
        adj = self.g.matrix
        adj_f = self.adj_f
        while True:
            # forward check: neighbors of newly assigned vertices lose that color
            for x in newly:
                col = int(dom[x].argmax())
                nb = adj[x] & ~assigned
                dom[nb, col] = False
            if (~dom[~assigned].any(axis=1)).any():
                return None
            newly = []
            single = (~assigned) & (dom.sum(axis=1) == 1)
            if single.any():
                newly = list(np.nonzero(single)[0])
                # two adjacent singletons with the same color clash
                cols = dom[newly].argmax(axis=1)
                sub = adj[np.ix_(newly, newly)]
                if (sub & (cols[:, None] == cols[None, :])).any():
                    return None
                assigned[newly] = True
                continue
            onehot = (dom & assigned[:, None]).astype(np.float64)
            seen = adj_f @ onehot > 0
            unmet = self.need & ~seen
            if not unmet.any():
                return dom, assigned
            support = adj_f @ (dom & ~assigned[:, None]).astype(np.float64)
            if (unmet & (support == 0)).any():
                return None
            forced = unmet & (support == 1)
            if forced.any():
                v, c = (int(a[0]) for a in np.nonzero(forced))
                w = int(np.nonzero(adj[v] & ~assigned & dom[:, c])[0][0])
                dom[w] = False
                dom[w, c] = True
                assigned[w] = True
                newly = [w]
                continue
            narrowed = self._hall(dom, assigned, unmet)
            if narrowed is None:
                return None
            if not narrowed:
                return dom, assigned

    def _hall(self, dom, assigned, unmet) -> bool | None:
        """Each vertex supplies one color, so a representative's missing colors
        need distinct suppliers among its free neighbors.

        Returns None on a violation and True if a domain was narrowed: when
        the suppliers are exactly as many as the missing colors, none of them
        can take any other color.
        """
        adj = self.g.matrix
        narrowed = False
        for v in np.nonzero(unmet.any(axis=1))[0]:
            cols = np.nonzero(unmet[v])[0]
            sup = np.nonzero(adj[v] & ~assigned)[0]
            if len(sup) < len(cols):
                return None
            options = [np.nonzero(col)[0].tolist() for col in dom[np.ix_(sup, cols)].T]
            if not _perfect_matching(options):
                return None
            if len(sup) == len(cols):
                outside = np.ones(self.k, dtype=bool)
                outside[cols] = False
                rows = dom[sup]
                if (rows & outside).any():
                    rows[:, outside] = False
                    dom[sup] = rows
                    narrowed = True
        return narrowed

    def _search(self, dom, assigned) -> np.ndarray | None:
        adj = self.g.matrix
        while True:
            self.steps += 1
            if self.steps % 64 == 0 and time.perf_counter() > self.deadline:
                raise _TimeUp
            if assigned.all():
                return dom.argmax(axis=1)
            onehot = (dom & assigned[:, None]).astype(np.float64)
            unmet = self.need & ~(self.adj_f @ onehot > 0)
            free = ~assigned
            if unmet.any():
                # most constrained requirement: fewest vertices able to supply it
                support = self.adj_f @ (dom & free[:, None]).astype(np.float64)
                score = np.where(unmet, support, np.inf)
                v, c = np.unravel_index(int(score.argmin()), score.shape)
                cands = np.nonzero(adj[v] & free & dom[:, c])[0]
                # prefer the supplier with the fewest alternatives
                w = int(cands[dom[cands].sum(axis=1).argmin()])
            else:
                sizes = np.where(free, dom.sum(axis=1), np.iinfo(np.int64).max)
                w = int(sizes.argmin())
                c = int(np.nonzero(dom[w])[0][0])
            # branch: w takes color c, or w never takes it
            d1, a1 = dom.copy(), assigned.copy()
            d1[w] = False
            d1[w, c] = True
            a1[w] = True
            state = self._propagate(d1, a1, [w])
            if state is not None:
                found = self._search(*state)
                if found is not None:
                    return found
            dom, assigned = dom.copy(), assigned.copy()
            dom[w, c] = False
            state = self._propagate(dom, assigned, [])
            if state is None:
                return None
            dom, assigned = state


def _perfect_matching(options: list[list[int]]) -> bool:
    """True iff every row can be matched to a distinct column (augmenting paths)."""
    owner: dict[int, int] = {}

    def augment(row: int, seen: set[int]) -> bool:
        for col in options[row]:
            if col in seen:
                continue
            seen.add(col)
            if col not in owner or augment(owner[col], seen):
                owner[col] = row
                return True
        return False

    # rows with fewer options first finds conflicts sooner
    for row in sorted(range(len(options)), key=lambda r: len(options[r])):
        if not augment(row, set()):
            return False
    return True


def branch_and_bound(
    model: Model,
    time_limit: float = 3600.0,
    warm: Assignment | None = None,
) -> BBResult:
    g = model.graph
    n = g.n
    deadline = time.perf_counter() + time_limit
    fixed = _Fixed(model)
    deg = g.degrees
    adj = g.matrix

    best_x: Assignment | None = None
    best = 0
    if warm is not None:
        best_x = dict(warm)
        best = model.objective(warm)

    base = sorted(fixed.forced_rep)
    cands = sorted(
        (u for u in range(n) if u not in fixed.no_rep and u not in fixed.forced_rep),
        key=lambda u: (-deg[u], u),
    )
    cdeg = [int(deg[u]) for u in cands]

    # witness masks: wit[(u, v)] = vertices that could carry u's color next to v
    bit = {u: 1 << u for u in range(n)}
    wit: dict[tuple[int, int], int] = {}
    possible = set(base) | set(cands)
    for u in possible:
        for v in possible:
            if u != v and not adj[u, v]:
                mask = 0
                for w in g.adjacency[v]:
                    if w != u and not adj[u, w] and not fixed.banned[u, w] and w not in fixed.forced_rep:
                        owner = fixed.forced_owner.get(w)
                        if owner is None or owner == u:
                            mask |= bit[w]
                wit[(u, v)] = mask

    def compatible(reps_mask: int, reps: list[int], c: int) -> bool:
        new_mask = reps_mask | bit[c]
        for r in reps:
            if not adj[r, c]:
                if not wit[(r, c)] & ~new_mask or not wit[(c, r)] & ~new_mask:
                    return False
        for i, r1 in enumerate(reps):
            for r2 in reps[i + 1 :]:
                if not adj[r1, r2]:
                    if wit[(r1, r2)] & bit[c] and not wit[(r1, r2)] & ~new_mask:
                        return False
                    if wit[(r2, r1)] & bit[c] and not wit[(r2, r1)] & ~new_mask:
                        return False
        return True

    for i, r1 in enumerate(base):
        for r2 in base[i + 1 :]:
            if not adj[r1, r2]:
                mask = sum(bit[r] for r in base)
                if not wit[(r1, r2)] & ~mask or not wit[(r2, r1)] & ~mask:
                    raise InfeasibleFixingError(f"forced representatives {r1} and {r2} cannot see each other")

    def degree_bound(size: int, min_deg: int, rest: list[int]) -> int:
        # rest: degrees of remaining compatible candidates, nonincreasing
        if size > min_deg + 1:
            return 0  # some representative cannot see every other color
        top = min(size + len(rest), min_deg + 1)
        for k in range(top, size, -1):
            # count rest with degree >= k - 1 (prefix, degrees sorted)
            cnt = 0
            for d in rest:
                if d >= k - 1:
                    cnt += 1
                else:
                    break
            if size + cnt >= k:
                return k
        return size

    stats = {"nodes": 0, "csp": 0}
    open_bounds: list[int] = []

    def try_set(reps: list[int]) -> None:
        nonlocal best, best_x
        stats["csp"] += 1
        order = sorted(reps)
        colors = _Csp(model, fixed, order, deadline).solve()
        if colors is not None:
            x: Assignment = {}
            for v in range(n):
                x[(order[int(colors[v])], v)] = 1
            best, best_x = len(order), x

    def visit(reps: list[int], reps_mask: int, start: int, min_deg: int) -> None:
        stats["nodes"] += 1
        if time.perf_counter() > deadline:
            raise _TimeUp
        if len(reps) > best:
            try_set(reps)
        rest = [j for j in range(start, len(cands)) if compatible(reps_mask, reps, cands[j])]
        # open_bounds is left intact when the time limit unwinds the recursion
        frame = len(open_bounds)
        open_bounds.append(0)
        for idx, j in enumerate(rest):
            c = cands[j]
            child_min = min(min_deg, cdeg[j])
            child_bound = degree_bound(len(reps) + 1, child_min, [cdeg[t] for t in rest[idx + 1 :]])
            open_bounds[frame] = child_bound
            if child_bound <= best:
                break  # later children have smaller bounds
            visit(reps + [c], reps_mask | bit[c], j + 1, child_min)
        open_bounds.pop()

    base_mask = sum(bit[r] for r in base)
    base_min = min((int(deg[r]) for r in base), default=n)
    root_rest = [cdeg[j] for j in range(len(cands)) if compatible(base_mask, base, cands[j])]
    root_bound = max(degree_bound(len(base), base_min, root_rest), len(base))
    complete = True
    try:
        if root_bound > best or (best_x is None and len(base) > 0):
            visit(base, base_mask, 0, base_min)
    except _TimeUp:
        complete = False
    if complete:
        bound = best
    else:
        bound = max(best, max(open_bounds, default=root_bound))
    return BBResult(best_x, best if best_x is not None else 0, bound, complete, stats["nodes"], stats["csp"])
