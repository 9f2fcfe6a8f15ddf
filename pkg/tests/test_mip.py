import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings

from bcol.coloring import Coloring, ColoringError, b_vertices, is_b_coloring
from bcol.generators import generate, mann_a9
from bcol.graph import Graph, complete_graph, cycle_graph, empty_graph, m_bound, path_graph, star_graph
from bcol.mip import (
    BackendError,
    InfeasibleFixingError,
    MipSolution,
    SolutionFormatError,
    SolverBackend,
    apply_improvement_fixing,
    apply_lower_bound_fixing,
    branch_and_bound,
    brute_force_chi_b,
    build_formulation,
    export_lp,
    format_solution,
    import_solution,
    isolated_anti_neighbors,
    local_search_fixings,
    mip_local_search,
    representatives,
    solve,
    warm_start_from_coloring,
)
from bcol.multistart import MultistartConfig, multistart_b_col

from .test_graph import graphs


def optimum(model, **kw):
    sol = solve(model, SolverBackend(**kw))
    assert sol.status == "optimal"
    return sol.objective_value


def small_graphs(limit=None):
    out = [Graph.from_networkx(G) for G in nx.graph_atlas_g()[1:] if nx.is_connected(G)]
    return out if limit is None else out[:limit]


# -- formulation --------------------------------------------------------------


def test_k3_model():
    m = build_formulation(complete_graph(3))
    assert m.variables == ((0, 0), (1, 1), (2, 2))
    assert m.constraint_counts() == {"cover": 3, "conflict": 0, "link": 0, "blink": 0}
    assert optimum(m) == 3


def test_edgeless_model():
    m = build_formulation(empty_graph(3))
    counts = m.constraint_counts()
    assert counts["blink"] == 6
    assert all(len(c.terms) == 2 for c in m.constraints(["blink"]))
    assert optimum(m) == 1


def test_path_model():
    assert optimum(build_formulation(path_graph(3))) == 2


def test_variables_respect_anti_neighborhoods():
    g, _ = generate("random", 15, 0.4, 1)
    m = build_formulation(g)
    for u, v in m.variables:
        assert u == v or not g.has_edge(u, v)
    assert len(m.variables) == g.n + 2 * (g.n * (g.n - 1) // 2 - g.num_edges)


@given(graphs(min_n=1, max_n=9))
@settings(max_examples=60, deadline=None)
def test_constraint_counts_match_enumeration(g):
    m = build_formulation(g)
    counts = m.constraint_counts()
    nonedges = g.n * (g.n - 1) // 2 - g.num_edges
    assert counts["cover"] == g.n
    assert counts["blink"] == 2 * nonedges
    conflict = link = 0
    for u in range(g.n):
        anti = [v for v in range(g.n) if v != u and not g.has_edge(u, v)]
        conflict += sum(1 for v, w in itertools.combinations(anti, 2) if g.has_edge(v, w))
        link += sum(1 for v in anti if not any(g.has_edge(v, w) for w in anti))
    assert counts["conflict"] == conflict
    assert counts["link"] == link


def test_isolated_anti_neighbors():
    # anti-neighbors of 0 in P4 (0-1-2-3) are 2 and 3, which are adjacent
    assert isolated_anti_neighbors(path_graph(4), 0) == []
    assert isolated_anti_neighbors(path_graph(4), 1) == [3]
    assert isolated_anti_neighbors(complete_graph(3), 0) == []


def test_blink_rows_both_orientations():
    names = {c.name: c for c in build_formulation(empty_graph(2)).constraints(["blink"])}
    assert set(names) == {"blink_1_2", "blink_2_1"}
    for c in names.values():
        assert sorted(c.terms) == [((0, 0), 1), ((1, 1), 1)] and c.sense == "<=" and c.rhs == 1


def test_violations_named():
    m = build_formulation(path_graph(3))
    x = {(0, 0): 1, (1, 1): 1, (2, 2): 1}  # three representatives on P3
    bad = m.violations(x)
    assert "blink_1_3" in bad and "blink_3_1" in bad
    assert m.violations({(0, 0): 1, (1, 1): 1, (0, 2): 1}) == []
    assert m.violations({(0, 1): 1}) != []


# -- fixings ------------------------------------------------------------------


def test_lower_bound_fixing_examples():
    star = build_formulation(star_graph(4))
    assert apply_lower_bound_fixing(star, 1).fixings == {}
    assert apply_lower_bound_fixing(star, 2).fixings == {}
    fixed = apply_lower_bound_fixing(star, 3).fixings
    for leaf in range(1, 5):
        assert fixed[(leaf, leaf)] == 0
        assert all(fixed[(leaf, v)] == 0 for v in range(1, 5) if v != leaf)
    assert (0, 0) not in fixed


def test_improvement_fixing_examples():
    g = star_graph(4)
    m = build_formulation(g)
    assert apply_improvement_fixing(m, 0).fixings == {}
    fixed = apply_improvement_fixing(m, 2, warm_b_vertices={0, 1}).fixings
    assert (1, 1) not in fixed and (0, 0) not in fixed
    assert fixed[(2, 2)] == 0


def test_with_fixings_conflict():
    m = build_formulation(path_graph(3))
    with pytest.raises(InfeasibleFixingError):
        m.with_fixings({(0, 0): 1}).with_fixings({(0, 0): 0})
    with pytest.raises(KeyError):
        m.with_fixings({(0, 1): 1})
    with pytest.raises(ValueError):
        m.with_fixings({(0, 0): 2})


def test_contradictory_fixings_detected():
    # 2 and 3 are adjacent, so they cannot both join the class of 0
    g = Graph(4, [(0, 1), (2, 3)])
    m = build_formulation(g).with_fixings({(0, 2): 1, (0, 3): 1})
    with pytest.raises(InfeasibleFixingError):
        solve(m)
    m = build_formulation(g).with_fixings({(0, 0): 0, (0, 2): 1})
    with pytest.raises(InfeasibleFixingError):
        solve(m)


# -- warm starts ----------------------------------------------------------------


def test_warm_start_examples():
    x, reps = warm_start_from_coloring(complete_graph(3), Coloring([1, 2, 3]))
    assert x == {(0, 0): 1, (1, 1): 1, (2, 2): 1} and reps == {0, 1, 2}
    g = star_graph(4)
    x, reps = warm_start_from_coloring(g, Coloring([1, 2, 2, 2, 2]))
    assert reps == {0, 1}
    assert x == {(0, 0): 1, (1, 1): 1, (1, 2): 1, (1, 3): 1, (1, 4): 1}
    assert build_formulation(g).is_feasible(x)
    with pytest.raises(ColoringError):
        warm_start_from_coloring(path_graph(4), Coloring([1, 2, 3, 1]))


def test_representatives_pick_highest_degree():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)])
    c = Coloring([1, 2, 1, 3, 1])
    reps = representatives(g, c)
    assert reps[2] == 1 and reps[3] == 3


@pytest.mark.parametrize("kind", ["random", "bipartite", "geometric"])
def test_heuristic_warm_starts_are_feasible(kind):
    g, _ = generate(kind, 25, 0.3, 4)
    res = multistart_b_col(g, MultistartConfig(it_max=10))
    x, reps = warm_start_from_coloring(g, res.best_coloring)
    m = build_formulation(g)
    assert m.violations(x) == []
    classes = lambda c: {frozenset(vs) for vs in c.classes().values()}
    assert classes(m.decode(x)) == classes(res.best_coloring)
    assert apply_improvement_fixing(m, res.best_value, reps).is_feasible(x)


# -- oracle and exact search ------------------------------------------------------


def test_oracle_examples():
    assert brute_force_chi_b(cycle_graph(5)) == 3
    assert brute_force_chi_b(star_graph(4)) == 2
    for n in range(1, 6):
        assert brute_force_chi_b(complete_graph(n)) == n
    assert brute_force_chi_b(path_graph(3)) == 2
    assert brute_force_chi_b(empty_graph(4)) == 1
    with pytest.raises(ValueError):
        brute_force_chi_b(empty_graph(11))


def test_oracle_non_monotone_case():
    # the 3-cube has a 2- and a 4-b-coloring but no 3-b-coloring
    g = Graph.from_networkx(nx.hypercube_graph(3))
    assert brute_force_chi_b(g) == 4


def test_bb_matches_oracle_small_sweep():
    for g in small_graphs(limit=150):
        m = build_formulation(g)
        sol = solve(m)
        assert sol.status == "optimal"
        assert sol.objective_value == brute_force_chi_b(g)
        c = m.decode(sol.assignment)
        assert is_b_coloring(g, c) and c.num_colors == sol.objective_value


@given(graphs(min_n=1, max_n=8))
@settings(max_examples=80, deadline=None)
def test_bb_matches_oracle_random(g):
    sol = solve(build_formulation(g))
    assert sol.objective_value == brute_force_chi_b(g)
    assert sol.bound == sol.objective_value


@given(graphs(min_n=2, max_n=8))
@settings(max_examples=60, deadline=None)
def test_fixings_keep_optimum(g):
    base = build_formulation(g)
    opt = optimum(base)
    assert optimum(apply_lower_bound_fixing(base, opt)) == opt
    # any optimal b-coloring's representatives serve as the warm b-vertices
    x = solve(base).assignment
    reps = {u for (u, v) in x if u == v}
    z_hat = opt - 1
    fixed = apply_improvement_fixing(base, z_hat, reps)
    assert optimum(fixed) == opt


def test_time_limit_returns_incumbent():
    g = mann_a9()
    res = multistart_b_col(g, MultistartConfig(it_max=5))
    x, reps = warm_start_from_coloring(g, res.best_coloring)
    m = apply_improvement_fixing(build_formulation(g), res.best_value, reps)
    sol = solve(m, SolverBackend(time_limit=0.5), warm=x)
    assert sol.status in ("optimal", "feasible-time-limit")
    assert sol.objective_value >= res.best_value
    assert sol.objective_value <= sol.bound <= m_bound(g)


def test_bb_result_fields():
    r = branch_and_bound(build_formulation(cycle_graph(5)))
    assert r.complete and r.objective == r.bound == 3
    assert r.nodes >= 1


def test_warm_start_must_be_feasible():
    m = build_formulation(path_graph(3))
    with pytest.raises(ValueError):
        solve(m, warm={(0, 0): 1, (1, 1): 1, (2, 2): 1})


def test_mip_solution_status_checked():
    with pytest.raises(ValueError):
        MipSolution(None, 0, 0, "done")
    with pytest.raises(ValueError):
        SolverBackend("cplex")
    with pytest.raises(ValueError):
        SolverBackend(time_limit=0)


# -- MIP local search -------------------------------------------------------------


def restricted_optimum(g, reps, k):
    """Best b-coloring keeping ``reps`` as b-vertices of distinct classes and
    using no vertex of degree < k outside ``reps`` as a representative."""
    n = g.n
    banned = {u for u in range(n) if u not in reps and g.degrees[u] < k}
    best = 0
    colors = [0] * n

    def extend(i, used):
        nonlocal best
        if i == n:
            c = Coloring(colors)
            bv = b_vertices(g, c)
            if any(not vs for vs in bv.values()):
                return
            rep_classes = [colors[r] for r in reps]
            if len(set(rep_classes)) != len(reps):
                return
            for r in reps:
                if r not in bv[colors[r]]:
                    return
            for k2, vs in bv.items():
                if k2 not in rep_classes and not (vs - banned):
                    return
            best = max(best, used)
            return
        for col in range(1, used + 2):
            if any(colors[w] == col for w in g.adjacency[i] if w < i):
                continue
            colors[i] = col
            extend(i + 1, max(used, col))
        colors[i] = 0

    extend(0, 0)
    return best


def test_local_search_keeps_optimal_input():
    g = cycle_graph(5)
    c = Coloring([1, 2, 3, 1, 2])
    out, sol = mip_local_search(g, c)
    assert out.num_colors == 3 and sol.status == "optimal"


def test_local_search_fixings():
    g = star_graph(4)
    fix = local_search_fixings(g, {0, 1}, 2)
    assert fix[(0, 0)] == fix[(1, 1)] == 1
    assert fix[(2, 2)] == 0 and fix[(2, 3)] == 0


def _suboptimal_cases(count):
    rnd = random.Random(5)
    found = 0
    while found < count:
        n = rnd.randint(6, 8)
        G = nx.gnp_random_graph(n, rnd.uniform(0.25, 0.6), seed=rnd.randrange(10**6))
        g = Graph.from_networkx(G)
        res = multistart_b_col(g, MultistartConfig(it_max=1, seed=rnd.randrange(100)))
        if res.best_value < brute_force_chi_b(g):
            found += 1
            yield g, res.best_coloring


def test_local_search_matches_restricted_brute_force():
    improved = 0
    for g, c in _suboptimal_cases(12):
        out, sol = mip_local_search(g, c)
        _, reps = warm_start_from_coloring(g, c)
        assert sol.status == "optimal"
        assert out.num_colors == restricted_optimum(g, reps, c.num_colors)
        assert out.num_colors >= c.num_colors
        assert is_b_coloring(g, out)
        improved += out.num_colors > c.num_colors
    assert improved >= 1


@pytest.mark.parametrize("seed", range(4))
def test_local_search_never_degrades(seed):
    g, _ = generate("random", 30, 0.3, seed)
    res = multistart_b_col(g, MultistartConfig(it_max=3, seed=seed))
    out, sol = mip_local_search(g, res.best_coloring, SolverBackend(time_limit=5))
    assert out.num_colors >= res.best_value
    assert is_b_coloring(g, out)


def test_local_search_rejects_non_b_coloring():
    with pytest.raises(ColoringError):
        mip_local_search(path_graph(4), Coloring([1, 2, 3, 1]))


# -- LP export / import -----------------------------------------------------------


def parse_lp(text):
    """Minimal reader for the exported subset of the LP format."""
    rows, bounds, binaries, section, cur = {}, {}, [], None, None
    for line in text.splitlines():
        if line.startswith("\\"):
            continue
        word = line.strip()
        if word in ("Maximize", "Subject To", "Bounds", "Binaries", "End"):
            section = word
            continue
        if section == "Binaries":
            binaries += word.split()
        elif section == "Bounds":
            name, _, val = word.split()
            bounds[name] = int(val)
        elif section in ("Maximize", "Subject To"):
            if not line.startswith("  "):
                name, rest = word.split(":", 1)
                cur = rows.setdefault(name, [])
                cur.append(rest)
            else:
                cur.append(word)
    parsed = {}
    for name, parts in rows.items():
        toks = " ".join(parts).split()
        terms, sign, coef, sense, rhs = {}, 1, 1, None, None
        i = 0
        while i < len(toks):
            t = toks[i]
            if t in ("+", "-"):
                sign = 1 if t == "+" else -1
            elif t in ("=", "<=", ">="):
                sense, rhs = t, int(toks[i + 1])
                break
            elif t.lstrip("-").isdigit():
                coef = int(t)
            else:
                terms[t] = sign * coef
                sign, coef = 1, 1
            i += 1
        parsed[name] = (terms, sense, rhs)
    return parsed, bounds, binaries


def test_export_k3():
    text = export_lp(build_formulation(complete_graph(3)))
    rows, bounds, binaries = parse_lp(text)
    assert binaries == ["x_1_1", "x_2_2", "x_3_3"]
    eq = [r for name, r in rows.items() if r[1] == "="]
    assert len(eq) == 3
    assert rows["obj"][0] == {"x_1_1": 1, "x_2_2": 1, "x_3_3": 1}
    assert text.endswith("End\n")


def test_export_empty_pair_has_both_blink_rows():
    text = export_lp(build_formulation(empty_graph(2)))
    assert " blink_1_2: x_1_1 + x_2_2 <= 1" in text.splitlines()
    assert " blink_2_1: x_2_2 + x_1_1 <= 1" in text.splitlines()


def test_export_matches_model_rows():
    g, _ = generate("random", 30, 0.5, 2)
    m = apply_lower_bound_fixing(build_formulation(g), 6)
    rows, bounds, binaries = parse_lp(export_lp(m))
    assert len(binaries) == len(m.variables)
    assert len(bounds) == len(m.fixings)
    for con in m.constraints():
        terms, sense, rhs = rows[con.name]
        assert terms == {f"x_{u + 1}_{v + 1}": c for (u, v), c in con.terms}
        assert (sense, rhs) == (con.sense, con.rhs)
    assert max(len(line) for line in export_lp(m).splitlines()) <= 80


def test_solution_round_trip_p3(tmp_path):
    m = build_formulation(path_graph(3))
    text = "status optimal\nobjective 2\nx_1_1 1\nx_2_2 1\nx_1_3 1\nx_3_3 0\n"
    x, obj, status = import_solution(m, text)
    assert obj == 2 == brute_force_chi_b(path_graph(3)) and status == "optimal"
    sol_file = tmp_path / "p3.sol"
    sol_file.write_text(text)
    sol = solve(m, SolverBackend("lp-export", workdir=tmp_path, solution_file=sol_file), name="p3")
    assert (tmp_path / "p3.lp").exists()
    assert sol.status == "optimal" and sol.objective_value == 2
    assert is_b_coloring(path_graph(3), m.decode(sol.assignment))


def test_export_without_solution_is_unknown(tmp_path):
    m = build_formulation(cycle_graph(5))
    sol = solve(m, SolverBackend("lp-export", workdir=tmp_path))
    assert sol.status == "unknown" and sol.assignment is None
    assert (tmp_path / "model.lp").read_text() == export_lp(m)


def test_format_solution_round_trip():
    m = build_formulation(cycle_graph(5))
    x = solve(m).assignment
    back, obj, status = import_solution(m, format_solution(m, x))
    assert back == x and obj == 3 and status == "optimal"


@pytest.mark.parametrize(
    "text",
    [
        "x_1_1 1\n",
        "objective 1\nx_1_1 1\nx_2_2 1\n",
        "objective 1\nx_1_2 1\n",
        "objective 1\nx_1_1 2\n",
        "objective 1\ny 1\n",
        "objective 1\nstatus done\nx_1_1 1\n",
        "objective 1 2\n",
    ],
)
def test_import_errors(text):
    with pytest.raises(SolutionFormatError):
        import_solution(build_formulation(path_graph(3)), text)


def test_imported_infeasible_solution_rejected(tmp_path):
    m = build_formulation(path_graph(3))
    f = tmp_path / "bad.sol"
    f.write_text("objective 3\nx_1_1 1\nx_2_2 1\nx_3_3 1\n")
    with pytest.raises(BackendError):
        solve(m, SolverBackend("lp-export", workdir=tmp_path, solution_file=f))


# -- HiGHS backend ----------------------------------------------------------------


def test_highs_agrees_with_bb():
    for g in small_graphs(limit=40)[::4] + [cycle_graph(7), star_graph(5)]:
        m = build_formulation(g)
        assert optimum(m, kind="highs") == optimum(m)


def test_mann_a9_optimum():
    g = mann_a9()
    sol = solve(build_formulation(g), SolverBackend("highs", time_limit=600))
    assert sol.status == "optimal" and sol.objective_value == 21
    assert is_b_coloring(g, build_formulation(g).decode(sol.assignment))
