import numpy as np
import pytest

from oracles import adjacency_pairs, all_subspaces, nondegenerate_count, span_set

from grasscode.codegraph import (
    bfs_distances,
    build_graph,
    connectivity,
    coordinate_hyperplane,
    coordinate_profile,
    count_codes,
    distance_coincidence_report,
    distance_threshold,
    graph_on,
    is_nondegenerate,
    n_count,
    n_count_batch,
    nondegenerate_array,
    nondegenerate_mask,
)
from grasscode.field import gf
from grasscode.grassmannian import GrassmannianParams, grassmannian_array, stacked_rank_batch, to_subspaces
from grasscode.linalg import intersect, orthocomplement, span

F2, F3 = gf(2), gf(3)


def e(i, n):
    return tuple(int(j == i) for j in range(n))


def test_nondegenerate_examples():
    for n in (3, 4, 7):
        assert is_nondegenerate(span(F2, (1,) * n))
    assert not is_nondegenerate(span(F2, e(0, 4), e(1, 4)))


def test_profile_examples():
    p = coordinate_profile(span(F2, (1,) * 6))
    assert (p.c, p.weight) == (0, 6)
    p = coordinate_profile(span(F2, e(0, 4)))
    assert (p.c, p.weight) == (3, 1)
    p = coordinate_profile(span(F2, (0, 0, 1, 1, 1)))
    assert (p.c, p.weight) == (2, 3)


def test_profile_weight_only_for_points():
    assert coordinate_profile(span(F2, e(0, 3), e(1, 3))).weight is None


def test_nondegenerate_iff_c_zero():
    for q, n, k in [(2, 4, 2), (3, 4, 2), (2, 5, 3), (4, 3, 2)]:
        F = gf(q)
        for X in to_subspaces(F, grassmannian_array(F, n, k)):
            assert is_nondegenerate(X) == (coordinate_profile(X).c == 0)


def test_coordinate_hyperplane():
    C = coordinate_hyperplane(F3, 4, 2)
    assert C.k == 3 and not any(r[2] for r in C.rows)
    assert orthocomplement(C) == span(F3, e(2, 4))


def test_n_count_full_space():
    for n in (3, 4, 5):
        assert n_count(span(F2, *[e(i, n) for i in range(n)])) == n


def test_n_count_proportional_functionals():
    # x1 and x2 agree on Y, so Y & C1 = Y & C2
    Y = span(F2, (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert intersect(Y, coordinate_hyperplane(F2, 4, 0)) == intersect(Y, coordinate_hyperplane(F2, 4, 1))
    assert n_count(Y) == 3 < 4


def test_n_count_rejects_degenerate():
    with pytest.raises(ValueError):
        n_count(span(F2, e(0, 4), e(1, 4), e(2, 4)))


def test_n_count_batch_matches_scalar():
    for q, n, k1 in [(2, 5, 3), (3, 4, 3), (4, 4, 2)]:
        F = gf(q)
        arr = nondegenerate_array(F, n, k1)
        batch = n_count_batch(F, arr)
        assert batch.tolist() == [n_count(Y) for Y in to_subspaces(F, arr)]


def test_count_codes_examples():
    assert count_codes(4, 2, 2) == 13
    for n, q in [(3, 2), (4, 3), (5, 4)]:
        assert count_codes(n, n, q) == 1
    for n in (4, 5, 6, 9):
        assert count_codes(n, 1, 2) == 1


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 4, 2), (2, 5, 3), (2, 5, 2), (3, 3, 2), (5, 3, 2)])
def test_count_codes_against_matrix_oracle(q, n, k):
    assert count_codes(n, k, q) == nondegenerate_count(n, k, q) == len(nondegenerate_array(gf(q), n, k))


def test_count_codes_over_supported_grid():
    for q in (2, 3, 4, 5, 7, 8, 9):
        for n in range(1, 6):
            for k in range(1, n + 1):
                if q ** (k * (n - k)) > 10**6:
                    continue
                arr = grassmannian_array(gf(q), n, k)
                assert count_codes(n, k, q) == int(nondegenerate_mask(arr).sum())


def test_binary_two_dim_count_closed_form():
    # columns pick one of the 3 non-zero vectors of GF(2)^2, at least two distinct
    for n in range(3, 10):
        assert count_codes(n, 2, 2) == (3**n - 3) // 6


def test_build_graph_examples():
    full = build_graph(GrassmannianParams(4, 2, F2), "full")
    assert full.num_vertices == 35 and (full.degrees() == 18).all()
    nd = build_graph(GrassmannianParams(4, 2, F2), "nondeg")
    assert nd.num_vertices == 13
    dual = build_graph(GrassmannianParams(4, 2, F2), "dual-nondeg")
    assert dual.num_vertices == 13
    assert {orthocomplement(X) for X in nd.vertices} == set(dual.vertices)
    with pytest.raises(ValueError):
        build_graph(GrassmannianParams(5, 2, F2), "dual-nondeg")
    with pytest.raises(ValueError):
        build_graph(GrassmannianParams(4, 2, F2), "bogus")


@pytest.mark.parametrize("q,n,k,variant", [(2, 4, 2, "full"), (2, 4, 2, "nondeg"), (3, 4, 2, "nondeg"), (2, 5, 3, "nondeg"), (2, 5, 2, "full")])
def test_edges_against_pair_scan(q, n, k, variant):
    g = build_graph(GrassmannianParams(n, k, gf(q)), variant)
    subs = [span_set(X.rows, q) for X in g.vertices]
    want = adjacency_pairs(subs, k, q)
    assert set(map(tuple, g.edge_array().tolist())) == want


def test_vertex_sets_against_oracle():
    g = build_graph(GrassmannianParams(4, 2, F3), "full")
    assert {span_set(X.rows, 3) for X in g.vertices} == all_subspaces(4, 2, 3)


def test_lookup_and_membership():
    g = build_graph(GrassmannianParams(4, 2, F2), "nondeg")
    for i, X in enumerate(g.vertices):
        assert g.index(X) == i and X in g
    assert span(F2, e(0, 4), e(1, 4)) not in g
    assert span(F2, (1, 1, 1, 1)) not in g


def test_complete_regime_flag():
    assert build_graph(GrassmannianParams(4, 1, F3), "full").complete_regime
    assert not build_graph(GrassmannianParams(4, 2, F3), "full").complete_regime
    g = build_graph(GrassmannianParams(4, 3, F2), "full")
    assert g.num_edges == 15 * 14 // 2


def test_connectivity_examples():
    assert connectivity(build_graph(GrassmannianParams(4, 2, F2), "nondeg")) == 1
    assert connectivity(build_graph(GrassmannianParams(4, 2, F2), "full")) == 1
    assert connectivity(build_graph(GrassmannianParams(3, 3, F2), "full")) == 1


def test_custom_vertex_set_can_disconnect():
    full = grassmannian_array(F2, 4, 2)
    X, Y = full[0], full[-1]  # span(e1, e2) and span(e3, e4)
    g = graph_on(GrassmannianParams(4, 2, F2), np.stack([X, Y]))
    assert g.num_edges == 0 and connectivity(g) == 2


def test_nondeg_path_distance_dominates_grassmann_distance():
    for q, n, k in [(2, 5, 2), (3, 4, 2), (2, 6, 3)]:
        F = gf(q)
        g = build_graph(GrassmannianParams(n, k, F), "nondeg")
        for s in range(0, g.num_vertices, 7):
            base = np.broadcast_to(g.vertex_array[s], g.vertex_array.shape)
            gd = stacked_rank_batch(F, base, g.vertex_array) - k
            assert (bfs_distances(g, s) >= gd).all()


def test_weight_and_c_consistency_binary_points():
    for n in range(3, 8):
        for P in to_subspaces(F2, grassmannian_array(F2, n, 1)):
            p = coordinate_profile(P)
            assert (p.weight >= 3) == (p.c <= n - 3)


def test_distance_report_examples():
    assert distance_threshold(2, 2) == 9
    rep = distance_coincidence_report(GrassmannianParams(5, 2, F2))
    assert rep["predicted_coincides"] and rep["coincides"] and rep["exhaustive"]
    assert rep["vertices"] == 40


def test_distance_witness_at_threshold():
    rep = distance_coincidence_report(GrassmannianParams(9, 2, F2), time_budget=60)
    assert not rep["predicted_coincides"]
    w = rep["witness"]
    assert w is not None and w["path_distance"] > w["grassmann_distance"]
