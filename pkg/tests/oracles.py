"""Brute-force reference computations, deliberately independent of the package internals.

Vectors are plain tuples and arithmetic is mod p, so these only cover prime q.
"""

import itertools


def rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        f = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * f % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def span_set(rows, p):
    """The set of all vectors in the span."""
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        out.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n)))
    return frozenset(out)


def all_subspaces(n, k, p):
    """Every k-subspace of GF(p)^n as a frozenset of vectors, by spanning all k-tuples."""
    vecs = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    seen = set()
    for combo in itertools.combinations(vecs, k):
        if rank_mod_p(combo, p) == k:
            seen.add(span_set(combo, p))
    return seen


def gl_order(k, q):
    out = 1
    for i in range(k):
        out *= q**k - q**i
    return out


def nondegenerate_count(n, k, p):
    """Full-rank k x n matrices without zero columns, modulo GL(k)."""
    cols = [c for c in itertools.product(range(p), repeat=k) if any(c)]
    total = 0
    for choice in itertools.product(cols, repeat=n):
        if rank_mod_p(list(zip(*choice)), p) == k:
            total += 1
    return total // gl_order(k, p)


def adjacency_pairs(subspaces, k, p):
    """Pairs (i, j), i < j, whose span sum has dimension k + 1."""
    out = set()
    for i, j in itertools.combinations(range(len(subspaces)), 2):
        inter = len(subspaces[i] & subspaces[j])
        if inter == p ** (k - 1):
            out.add((i, j))
    return out
