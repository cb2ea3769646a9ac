import numpy as np
import pytest

from oracles import all_subspaces, span_set

from grasscode.codegraph import bfs_distances, build_graph
from grasscode.field import gf
from grasscode.grassmannian import (
    BudgetExceededError,
    GrassmannianParams,
    enumerate_grassmannian,
    gaussian_binomial,
    gaussian_number,
    grassmann_distance,
    grassmannian_array,
    hyperplanes_batch,
    is_adjacent,
    pivot_sets,
    ranker,
    stacked_rank_batch,
    superspaces_batch,
    to_subspaces,
)
from grasscode.linalg import span

F2 = gf(2)


def test_gaussian_number_examples():
    assert gaussian_number(3, 2) == 7
    assert gaussian_number(0, 5) == 0
    assert gaussian_number(2, 3) == 4


def test_gaussian_binomial_examples():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(7, 0, 3) == 1
    assert gaussian_binomial(4, 2, 3) == 130
    with pytest.raises(ValueError):
        gaussian_binomial(3, 4, 2)


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 4, 2), (2, 5, 3), (5, 3, 1)])
def test_gaussian_binomial_against_brute_force(q, n, k):
    assert gaussian_binomial(n, k, q) == len(all_subspaces(n, k, q))


def test_small_enumerations():
    got = [X.rows for X in enumerate_grassmannian(GrassmannianParams(2, 1, F2))]
    assert got == [((1, 0),), ((1, 1),), ((0, 1),)]
    full = list(enumerate_grassmannian(GrassmannianParams(3, 3, F2)))
    assert len(full) == 1 and full[0].k == 3


def test_enumeration_matches_oracle_without_duplicates():
    listed = list(enumerate_grassmannian(GrassmannianParams(4, 2, F2)))
    assert len(listed) == 35 == len(set(listed))
    assert {span_set(X.rows, 2) for X in listed} == all_subspaces(4, 2, 2)


def test_generator_and_array_agree():
    for q, n, k in [(3, 4, 2), (4, 3, 1), (2, 5, 3)]:
        F = gf(q)
        gen = [X.rows for X in enumerate_grassmannian(GrassmannianParams(n, k, F))]
        arr = [X.rows for X in to_subspaces(F, grassmannian_array(F, n, k))]
        assert gen == arr


def test_pivot_sets_colex():
    assert pivot_sets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


def test_ranker_inverts_enumeration():
    for q, n, k in [(2, 5, 2), (3, 4, 2), (4, 4, 3), (9, 3, 2)]:
        arr = grassmannian_array(gf(q), n, k)
        assert np.array_equal(ranker(q, n, k).rank(arr), np.arange(len(arr)))


def test_budget_refusal():
    params = GrassmannianParams(6, 3, gf(5), budget=1000)
    with pytest.raises(BudgetExceededError) as err:
        next(enumerate_grassmannian(params))
    assert err.value.required == gaussian_binomial(6, 3, 5)
    with pytest.raises(BudgetExceededError):
        grassmannian_array(gf(5), 6, 3, budget=1000)


def test_params_validation():
    with pytest.raises(ValueError):
        GrassmannianParams(3, 0, F2)
    with pytest.raises(ValueError):
        GrassmannianParams(3, 4, F2)


def test_adjacency_examples():
    e = lambda i: tuple(int(j == i) for j in range(4))
    X = span(F2, e(0), e(1))
    assert not is_adjacent(X, X)
    assert is_adjacent(X, span(F2, e(0), e(2)))
    assert grassmann_distance(X, X) == 0
    assert grassmann_distance(X, span(F2, e(0), e(2))) == 1
    assert grassmann_distance(X, span(F2, e(2), e(3))) == 2
    with pytest.raises(ValueError):
        is_adjacent(X, span(F2, e(0)))
    with pytest.raises(ValueError):
        grassmann_distance(X, span(F2, e(0)))


def test_hyperplanes_and_superspaces():
    F = gf(3)
    arr = grassmannian_array(F, 4, 2)
    hyp = hyperplanes_batch(F, arr)
    sup = superspaces_batch(F, arr)
    assert hyp.shape == (130, 4, 1, 4) and sup.shape == (130, 4, 3, 4)
    X = to_subspaces(F, arr[[17]])[0]
    assert all(Z <= X for Z in to_subspaces(F, hyp[17]))
    assert all(X <= Z for Z in to_subspaces(F, sup[17]))
    assert len(set(to_subspaces(F, sup[17]))) == 4


def _all_pairs_distances(g):
    """Dense BFS layers by boolean matrix powers."""
    N = g.num_vertices
    A = np.zeros((N, N), dtype=np.float32)
    e = g.edge_array()
    A[e[:, 0], e[:, 1]] = A[e[:, 1], e[:, 0]] = 1
    D = np.full((N, N), -1, dtype=np.int64)
    reach = np.eye(N, dtype=np.float32)
    np.fill_diagonal(D, 0)
    d = 0
    while True:
        d += 1
        nxt = np.minimum(reach + reach @ A, 1)
        new = (nxt > 0) & (D < 0)
        if not new.any():
            return D
        D[new] = d
        reach = nxt


GRID_UNDER_2000 = [
    (q, n, k)
    for q in (2, 3)
    for n in range(2, 7)
    for k in range(1, n)
    if gaussian_binomial(n, k, q) <= 2000
]


@pytest.mark.parametrize("q,n,k", GRID_UNDER_2000)
def test_full_graph_path_distance_equals_grassmann_distance(q, n, k):
    F = gf(q)
    g = build_graph(GrassmannianParams(n, k, F), "full")
    D = _all_pairs_distances(g)
    N = g.num_vertices
    i, j = np.triu_indices(N, 1)
    gd = stacked_rank_batch(F, g.vertex_array[i], g.vertex_array[j]) - k
    assert np.array_equal(D[i, j], gd)
    # spot-check the sparse BFS against the dense layers
    assert np.array_equal(bfs_distances(g, N // 2), D[N // 2])


def test_full_graph_degree_regularity():
    for q, n, k in [(2, 4, 2), (3, 5, 2), (2, 6, 3), (4, 4, 2)]:
        g = build_graph(GrassmannianParams(n, k, gf(q)), "full")
        want = q * gaussian_number(k, q) * gaussian_number(n - k, q)
        assert (g.degrees() == want).all()


def test_budget_error_survives_pickling():
    import pickle

    err = pickle.loads(pickle.dumps(BudgetExceededError(10, 5, "edges")))
    assert (err.required, err.budget, err.what) == (10, 5, "edges")
    assert "edges" in str(err)
