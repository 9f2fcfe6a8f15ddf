import math

import pytest

from bcol.coloring import is_b_coloring
from bcol.constructive import RclParams
from bcol.generators import c_fat, generate
from bcol.graph import Graph, complete_graph, empty_graph, m_bound
from bcol.multistart import (
    EDGELESS_IT_MAX,
    MultistartConfig,
    default_it_max,
    iteration_rng,
    multistart_b_col,
    validate_result,
)


def _graph_with_sizes(n, m):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)][:m]
    return Graph(n, pairs)


def test_default_it_max_examples():
    assert default_it_max(complete_graph(5)) == 547
    assert default_it_max(_graph_with_sizes(125, 736)) == 390
    assert default_it_max(empty_graph(4)) == EDGELESS_IT_MAX == 1100


def test_default_it_max_formula():
    for n, m in [(10, 3), (50, 245), (200, 8473)]:
        g = _graph_with_sizes(n, m)
        p = 2 * m / (n * (n - 1))
        expected = 100 + math.floor(1000 / (math.sqrt(n) * math.sqrt(p)) + 0.5)
        assert default_it_max(g) == expected >= 100


def test_config_validation():
    with pytest.raises(ValueError):
        MultistartConfig(it_max=0)
    with pytest.raises(ValueError):
        MultistartConfig(workers=0)


def test_complete_graph_stops_at_first_iteration():
    res = multistart_b_col(complete_graph(6))
    assert res.best_value == 6 and res.proved_optimal
    assert res.iterations_run == 1
    validate_result(complete_graph(6), res)


def test_c_fat_reaches_m():
    g = c_fat(200, 5)
    res = multistart_b_col(g)
    assert res.best_value == 86 == m_bound(g)
    assert res.proved_optimal


def test_iteration_streams_are_independent_of_order():
    a = [iteration_rng(7, i).random() for i in range(5)]
    b = [iteration_rng(7, i).random() for i in reversed(range(5))][::-1]
    assert a == b
    assert len(set(a)) == 5


def test_result_invariants():
    g, _ = generate("random", 50, 0.3, 3)
    res = multistart_b_col(g, MultistartConfig(it_max=40, seed=5, early_exit=False))
    validate_result(g, res)
    assert res.iterations_run == 40
    assert res.best_value == max(res.values)
    assert res.avg_value == pytest.approx(sum(res.values) / 40)
    assert res.values[res.best_iteration] == res.best_value
    assert is_b_coloring(g, res.best_coloring)


def test_progress_events_are_monotone():
    g, _ = generate("bipartite", 60, 0.4, 1)
    events = []
    multistart_b_col(g, MultistartConfig(it_max=50, early_exit=False), events.append)
    assert [e.iteration for e in events] == list(range(50))
    bests = [e.value for e in events if e.new_best]
    assert bests == sorted(bests) and len(set(bests)) == len(bests)
    fields = str(events[0]).split()
    assert len(fields) == 4 and fields[2] in ("0", "1")


def test_serial_and_parallel_iterates_match():
    g, _ = generate("geometric", 50, 0.3, 2)
    cfg = dict(it_max=16, seed=11, early_exit=False, rcl=RclParams(0.2, 0.3))
    one = multistart_b_col(g, MultistartConfig(workers=1, **cfg))
    many = multistart_b_col(g, MultistartConfig(workers=3, **cfg))
    assert one.values == many.values
    assert one.best_value == many.best_value
    assert one.avg_value == many.avg_value
    assert one.best_coloring == many.best_coloring


def test_rerun_is_identical():
    g, _ = generate("random", 40, 0.4, 9)
    cfg = MultistartConfig(it_max=20, seed=3)
    a, b = multistart_b_col(g, cfg), multistart_b_col(g, cfg)
    assert (a.best_value, a.avg_value, a.values) == (b.best_value, b.avg_value, b.values)


def test_time_budget_stops_early():
    g, _ = generate("random", 120, 0.5, 1)
    res = multistart_b_col(g, MultistartConfig(it_max=10_000, time_budget=0.2, early_exit=False))
    assert 1 <= res.iterations_run < 10_000


def test_single_vertex():
    res = multistart_b_col(Graph(1))
    assert res.best_value == 1 and res.proved_optimal
