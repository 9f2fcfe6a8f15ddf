import pytest

from bcol.dimacs import DimacsError, parse_dimacs, read_dimacs, save_dimacs, write_dimacs
from bcol.generators import generate
from bcol.graph import Graph, InstanceMeta, complete_graph, empty_graph


def test_parse_triangle():
    g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    assert g == complete_graph(3)
    assert g.degrees.tolist() == [2, 2, 2]


def test_parse_accepts_variants_and_dedups():
    text = "c hello\n\np col 4 5\ne 1 2\ne 2 1\ne 1 2\ne 3 4\nn 1 7\n"
    g = parse_dimacs(text.encode())
    assert g.edge_list() == [(0, 1), (2, 3)]
    assert parse_dimacs("p edges 2 1\ne 1 2").num_edges == 1


@pytest.mark.parametrize(
    "text",
    [
        "p edge x 3\n",
        "p graph 3 1\ne 1 2\n",
        "p edge 3\n",
        "p edge 3 1\np edge 3 1\n",
        "p edge 3 1\ne 1 4\n",
        "p edge 3 1\ne 0 1\n",
        "p edge 3 1\ne 2 2\n",
        "e 1 2\np edge 3 1\n",
        "p edge 3 1\ne 1\n",
        "c nothing here\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


def test_write_format():
    assert write_dimacs(complete_graph(3)) == "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n"
    assert write_dimacs(empty_graph(5)) == "p edge 5 0\n"


@pytest.mark.parametrize("kind", ["random", "bipartite", "geometric"])
def test_round_trip_generated(kind, tmp_path):
    g, meta = generate(kind, 30, 0.3, 7)
    assert parse_dimacs(write_dimacs(g, meta)) == g
    path = tmp_path / "x.col"
    save_dimacs(path, g, meta)
    g2, meta2 = read_dimacs(path)
    assert g2 == g
    assert meta2.source == "generated"
    assert meta2.generator == meta.generator
    assert meta2.group == meta.group


def test_read_infers_source(tmp_path):
    (tmp_path / "a.clq").write_text("p edge 2 1\ne 1 2\n")
    (tmp_path / "b.col").write_text("p edge 2 0\n")
    assert read_dimacs(tmp_path / "a.clq")[1] == InstanceMeta("a.clq", "dimacs-clq")
    assert read_dimacs(tmp_path / "b.col")[1] == InstanceMeta("b.col", "dimacs-col")


def test_write_is_deterministic():
    g = Graph(4, [(3, 0), (2, 1), (0, 1)])
    assert write_dimacs(g) == write_dimacs(Graph(4, [(1, 0), (1, 2), (0, 3)]))
