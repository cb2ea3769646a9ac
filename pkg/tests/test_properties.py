"""Randomised invariants, checked with hypothesis."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscode.codegraph import is_nondegenerate
from grasscode.field import SUPPORTED_ORDERS, gf
from grasscode.grassmannian import grassmann_distance, is_adjacent
from grasscode.linalg import (
    ZeroSubspaceError,
    canonicalize,
    intersect,
    matmul_batch,
    orthocomplement,
    rref,
    rref_batch,
    subspace_sum,
)
from grasscode.morphisms import MonomialMap, apply_map

SMALL_Q = [2, 3, 4, 5, 8, 9]


@st.composite
def matrices(draw, q=None, n=None, rows=None):
    q = q or draw(st.sampled_from(SMALL_Q))
    n = n or draw(st.integers(2, 6))
    r = rows or draw(st.integers(1, n))
    data = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=r, max_size=r))
    return q, n, data


@st.composite
def subspaces(draw, q=None, n=None):
    q, n, data = draw(matrices(q, n))
    try:
        return canonicalize(gf(q), data, n)
    except ZeroSubspaceError:
        return canonicalize(gf(q), [[1] + [0] * (n - 1)], n)


@st.composite
def subspace_pairs(draw):
    q = draw(st.sampled_from(SMALL_Q))
    n = draw(st.integers(2, 6))
    return draw(subspaces(q, n)), draw(subspaces(q, n))


def dim(result):
    return result[0]


@given(subspace_pairs())
def test_dimension_formula(pair):
    X, Y = pair
    assert subspace_sum(X, Y).k + dim(intersect(X, Y)) == X.k + Y.k


@given(subspace_pairs())
def test_sum_and_intersection_symmetric(pair):
    X, Y = pair
    assert subspace_sum(X, Y) == subspace_sum(Y, X)
    assert intersect(X, Y) == intersect(Y, X)
    S = subspace_sum(X, Y)
    assert X <= S and Y <= S
    d, meet = intersect(X, Y)
    if meet is not None:
        assert meet <= X and meet <= Y


@given(subspaces())
def test_double_orthocomplement(X):
    if X.k < X.n:
        P = orthocomplement(X)
        assert P.k == X.n - X.k
        assert orthocomplement(P) == X


@given(subspaces(), st.integers(0, 2**32 - 1))
def test_canonical_form_orbit_invariance(X, seed):
    F = X.field
    rng = np.random.default_rng(seed)
    while True:
        A = rng.integers(0, F.q, size=(X.k, X.k)).astype(np.uint8)
        if rref_batch(F, A[None])[1][0] == X.k:
            break
    scrambled = matmul_batch(F, A, X.basis).tolist()
    assert canonicalize(F, scrambled, X.n) == X


@given(matrices())
def test_batch_rref_matches_scalar(m):
    q, n, data = m
    F = gf(q)
    rows, pivots = rref(F, data, n)
    red, rank = rref_batch(F, np.array([data], dtype=np.uint8))
    assert rank[0] == len(rows)
    assert red[0, : len(rows)].tolist() == [list(r) for r in rows]
    assert not red[0, len(rows) :].any()


@given(subspace_pairs())
def test_adjacency_is_distance_one(pair):
    X, Y = pair
    if X.k == Y.k:
        assert is_adjacent(X, Y) == (grassmann_distance(X, Y) == 1)
        assert grassmann_distance(X, Y) == grassmann_distance(Y, X)


@st.composite
def monomials(draw, q, n):
    F = gf(q)
    perm = tuple(draw(st.permutations(range(n))))
    scalars = tuple(draw(st.lists(st.integers(1, q - 1), min_size=n, max_size=n)))
    return MonomialMap(F, perm, scalars, draw(st.integers(0, F.e - 1)))


@settings(max_examples=60)
@given(st.data())
def test_monomial_maps_compose_and_preserve_nondegeneracy(data):
    q = data.draw(st.sampled_from([2, 3, 4, 8, 9]))
    n = data.draw(st.integers(2, 5))
    a, b = data.draw(monomials(q, n)), data.draw(monomials(q, n))
    X = data.draw(subspaces(q, n))
    assert apply_map(a, apply_map(b, X)) == apply_map(a.compose(b), X)
    assert is_nondegenerate(apply_map(a, X)) == is_nondegenerate(X)
    Y = data.draw(subspaces(q, n))
    if X.k == Y.k:
        assert is_adjacent(apply_map(a, X), apply_map(a, Y)) == is_adjacent(X, Y)


@settings(max_examples=30)
@given(st.sampled_from(SUPPORTED_ORDERS), st.data())
def test_field_inverse_and_frobenius(q, data):
    F = gf(q)
    a = data.draw(st.integers(1, q - 1))
    assert F.mul_table[a, F.inv_table[a]] == 1
    frob = F.frobenius(1)
    b = data.draw(st.integers(0, q - 1))
    assert frob[F.mul_table[a, b]] == F.mul_table[frob[a], frob[b]]
