import networkx as nx
import numpy as np
import pytest

from grasscode.codegraph import build_graph
from grasscode.field import gf
from grasscode.graphio import dimacs_decode, dimacs_encode, graph6_decode, graph6_encode, write_graph
from grasscode.grassmannian import GrassmannianParams
from grasscode.linalg import parse_subspace


def edges_of(G):
    return np.array(sorted(tuple(sorted(e)) for e in G.edges()), dtype=np.int64).reshape(-1, 2)


@pytest.mark.parametrize("n", [0, 1, 2, 7, 62, 63, 64, 130, 300])
def test_graph6_matches_networkx(n):
    G = nx.gnp_random_graph(n, 0.25, seed=n)
    data = graph6_encode(n, edges_of(G))
    assert data == nx.to_graph6_bytes(G, header=False)
    m, e = graph6_decode(data)
    assert m == n and np.array_equal(e, edges_of(G))
    H = nx.from_graph6_bytes(data.strip()) if n else nx.Graph()
    assert sorted(map(sorted, H.edges())) == sorted(map(sorted, G.edges()))


def test_graph6_header_accepted():
    data = graph6_encode(5, np.array([[0, 1], [3, 4]]))
    n1, e1 = graph6_decode(b">>graph6<<" + data)
    n2, e2 = graph6_decode(data)
    assert n1 == n2 == 5 and np.array_equal(e1, e2)


def test_graph6_rejects_garbage():
    with pytest.raises(ValueError):
        graph6_decode(b"")
    with pytest.raises(ValueError):
        graph6_decode(b"D\x10")
    with pytest.raises(ValueError):
        graph6_decode(b"D?")  # n = 5 needs two body bytes
    with pytest.raises(ValueError):
        graph6_decode(b"B@")  # padding bits set


def test_graph6_rejects_loops():
    with pytest.raises(ValueError):
        graph6_encode(3, np.array([[1, 1]]))


def test_dimacs_round_trip_and_format():
    e = np.array([[0, 1], [1, 2], [0, 2]])
    text = dimacs_encode(4, e, ("triangle",))
    assert text.splitlines()[:3] == ["c triangle", "p edge 4 3", "e 1 2"]
    n, back = dimacs_decode(text)
    assert n == 4 and back.tolist() == [[0, 1], [0, 2], [1, 2]]


def test_dimacs_errors():
    with pytest.raises(ValueError):
        dimacs_decode("e 1 2\n")
    with pytest.raises(ValueError):
        dimacs_decode("p edge 2 1\ne 1 3\n")
    with pytest.raises(ValueError):
        dimacs_decode("p edge 3 2\ne 1 2\n")


def test_write_graph_with_labels(tmp_path):
    g = build_graph(GrassmannianParams(4, 2, gf(3)), "nondeg")
    out, labels = write_graph(g, tmp_path / "g.g6", "graph6")
    n, e = graph6_decode(out.read_bytes())
    assert n == g.num_vertices and np.array_equal(e, g.edge_array())
    lines = labels.read_text().splitlines()
    assert [parse_subspace(gf(3), s) for s in lines] == g.vertices
    out, _ = write_graph(g, tmp_path / "g.dimacs", "dimacs")
    n, e = dimacs_decode(out.read_text())
    assert np.array_equal(e, g.edge_array())
    with pytest.raises(ValueError):
        write_graph(g, tmp_path / "g.x", "adjlist")
