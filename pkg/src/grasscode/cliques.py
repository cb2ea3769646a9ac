"""Stars, tops, lines and their non-degenerate restrictions.

Maximality is always decided against a materialised :class:`GraphHandle`:
a clique is maximal iff the common neighbourhood of its members is empty.
The checks below assert the known maximality classification on that ground
truth, anchor by anchor, and report every violation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codegraph import GraphHandle, build_graph, coordinate_profile, gather_neighbors, is_nondegenerate
from .grassmannian import (
    GrassmannianParams,
    gaussian_number,
    grassmannian_array,
    hyperplanes_batch,
    ranker,
    superspaces_batch,
    to_subspaces,
)
from .linalg import Subspace, intersect, rref_batch
from .field import gf

__all__ = [
    "CliqueDescriptor",
    "star",
    "top",
    "line",
    "star_restricted",
    "top_restricted",
    "star_restricted_size_formula",
    "common_neighbors",
    "is_maximal_clique",
    "restricted_family",
    "maximal_mask",
    "check_prop_star",
    "check_prop_top",
    "bron_kerbosch",
    "maximal_clique_census",
    "CENSUS_VERTEX_CAP",
]

CENSUS_VERTEX_CAP = 1000
MAX_LISTED = 20


@dataclass(frozen=True)
class CliqueDescriptor:
    kind: str  # star | top | star-restricted | top-restricted | line
    anchor: Subspace
    members: tuple[Subspace, ...]
    anchor2: Subspace | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _sorted_subspaces(F, arr: np.ndarray) -> tuple[Subspace, ...]:
    n, d = arr.shape[-1], arr.shape[-2]
    arr = arr[np.argsort(ranker(F.q, n, d).rank(arr), kind="stable")]
    return tuple(to_subspaces(F, arr))


def star(X: Subspace) -> CliqueDescriptor:
    """All (dim X + 1)-subspaces containing ``X``."""
    if X.k >= X.n:
        raise ValueError("star anchor must be a proper subspace")
    members = superspaces_batch(X.field, X.basis[None])[0]
    return CliqueDescriptor("star", X, _sorted_subspaces(X.field, members))


def top(Y: Subspace) -> CliqueDescriptor:
    """All (dim Y - 1)-subspaces of ``Y``."""
    if Y.k < 2:
        raise ValueError("top anchor must have dimension >= 2")
    members = hyperplanes_batch(Y.field, Y.basis[None])[0]
    return CliqueDescriptor("top", Y, _sorted_subspaces(Y.field, members))


def line(X: Subspace, Y: Subspace) -> CliqueDescriptor:
    if Y.k != X.k + 2:
        raise ValueError(f"line needs dim Y = dim X + 2, got {X.k} and {Y.k}")
    if not X <= Y:
        raise ValueError("line needs X contained in Y")
    members = tuple(Z for Z in star(X).members if Z <= Y)
    return CliqueDescriptor("line", X, members, anchor2=Y)


def star_restricted(X: Subspace) -> CliqueDescriptor:
    return CliqueDescriptor("star-restricted", X, tuple(Z for Z in star(X).members if is_nondegenerate(Z)))


def top_restricted(Y: Subspace) -> CliqueDescriptor:
    return CliqueDescriptor("top-restricted", Y, tuple(Z for Z in top(Y).members if is_nondegenerate(Z)))


def star_restricted_size_formula(X: Subspace) -> int:
    """``(q-1)^(c-1) q^(n-k-c+1)`` with ``k = dim X + 1`` and ``c = c(X)``."""
    n, k, q = X.n, X.k + 1, X.q
    c = coordinate_profile(X).c
    if c == 0:
        raise ValueError(f"formula inapplicable for c(X) = 0; the restricted star is the whole star of size [{n - k + 1}]_q")
    if c > n - k + 1:
        raise ValueError(f"c(X) = {c} exceeds n - k + 1 = {n - k + 1}")
    return (q - 1) ** (c - 1) * q ** (n - k - c + 1)


def common_neighbors(g: GraphHandle, members) -> np.ndarray:
    """Vertices adjacent to every member (members never qualify: no loops)."""
    members = list(members)
    if not members:
        return np.arange(g.num_vertices)
    cur = g.neighbors(members[0])
    for m in members[1:]:
        if not len(cur):
            break
        cur = np.intersect1d(cur, g.neighbors(m), assume_unique=True)
    return cur


def maximal_mask(g: GraphHandle, fam: np.ndarray, chunk: int = 4_000_000) -> np.ndarray:
    """Batched maximality: row ``a`` of ``fam`` lists the members of a clique
    (vertex indices, -1 padding); the result is True where no vertex is
    adjacent to every member.  Empty rows give False.
    """
    fam = np.sort(np.asarray(fam, dtype=np.int64), axis=1)[:, ::-1]
    sizes = (fam >= 0).sum(axis=1)
    out = np.zeros(len(fam), dtype=bool)
    codes = g.directed_codes
    N = g.num_vertices
    deg = g.degrees()
    rows_all = np.flatnonzero(sizes)
    if not len(rows_all):
        return out
    work = np.cumsum(deg[fam[rows_all, 0]])
    bounds = np.searchsorted(work, np.arange(chunk, int(work[-1]) + chunk, chunk), side="right")
    start = 0
    for stop in np.unique(np.append(bounds, len(rows_all))).tolist():
        if stop <= start:
            continue
        rows = rows_all[start:stop]
        start = stop
        first = fam[rows, 0]
        cand = gather_neighbors(g, first).astype(np.int64)
        rid = np.repeat(np.arange(len(rows)), deg[first])
        for j in range(1, fam.shape[1]):
            if not len(cand):
                break
            mj = fam[rows, j][rid]
            key = mj * N + cand
            pos = np.minimum(np.searchsorted(codes, key), len(codes) - 1)
            keep = (mj < 0) | (codes[pos] == key)
            cand, rid = cand[keep], rid[keep]
        out[rows] = np.bincount(rid, minlength=len(rows)) == 0
    return out


def _as_indices(members, g: GraphHandle) -> list[int]:
    out = []
    for m in members:
        i = g.index(m) if isinstance(m, Subspace) else int(m)
        if not 0 <= i < g.num_vertices:
            raise ValueError(f"{m} is not a vertex of the graph")
        out.append(i)
    return out


def is_maximal_clique(members, g: GraphHandle) -> bool:
    """``members`` are Subspaces or vertex indices of ``g``."""
    idx = _as_indices(members, g)
    if not idx:
        raise ValueError("empty vertex set is not a clique")
    if len(set(idx)) != len(idx):
        raise ValueError("repeated vertex in clique")
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if not g.has_edge(idx[a], idx[b]):
                raise ValueError("input is not a clique")
    return len(common_neighbors(g, idx)) == 0


def restricted_family(g: GraphHandle, anchors: np.ndarray, kind: str) -> np.ndarray:
    """Vertex indices of the star/top members of each anchor; -1 where a member is not a vertex.

    Returns an ``(A, m)`` array with ``m = [n-k+1]_q`` for stars and
    ``[k+1]_q`` for tops.
    """
    F, n, k = g.field, g.params.n, g.params.k
    if kind == "star":
        fam = superspaces_batch(F, anchors)
    elif kind == "top":
        fam = hyperplanes_batch(F, anchors)
    else:
        raise ValueError(kind)
    A, m = fam.shape[:2]
    return g.lookup(fam.reshape(A * m, k, n)).reshape(A, m)


def _params_dict(n, k, q):
    return {"n": n, "k": k, "q": q}


def _require_range(n: int, k: int) -> None:
    if not 1 < k < n - 1:
        raise ValueError(f"need 1 < k < n - 1, got n={n}, k={k}")


def _graph(n, k, q, graph):
    if graph is not None:
        return graph
    return build_graph(GrassmannianParams(n, k, gf(q)), "nondeg")


def _report(n, k, q, assertion, claim, counterexamples, **extra) -> dict:
    report = {
        "params": _params_dict(n, k, q),
        "assertion": assertion,
        "claim": claim,
        "status": "fail" if counterexamples else "pass",
        "violations": len(counterexamples),
        "counterexamples": counterexamples[:MAX_LISTED],
    }
    report.update(extra)
    return report


def check_prop_star(n: int, k: int, q: int, graph: GraphHandle | None = None) -> dict:
    """Maximality of restricted stars ``S^c(X)`` for every (k-1)-subspace ``X``.

    (i) q >= 3: every S^c(X) is maximal.  (ii) q = 2: maximal iff
    c(X) <= n-k-1; when not maximal, |S^c(X)| is 2 for c = n-k and 1 for
    c = n-k+1.  (iii) a maximal S^c(X) equals no T^c(Y).
    """
    _require_range(n, k)
    g = _graph(n, k, q, graph)
    F = g.field
    anchors = grassmannian_array(F, n, k - 1)
    fam = restricted_family(g, anchors, "star")
    sizes = (fam >= 0).sum(axis=1)
    zero_cols = (anchors == 0).all(axis=1).sum(axis=1)
    maximal = maximal_mask(g, fam)
    equals_top = _star_equals_some_top(g, fam, sizes, maximal)

    problems: dict[int, list[str]] = {}
    for a in np.flatnonzero(sizes).tolist():
        c, size, mx = int(zero_cols[a]), int(sizes[a]), bool(maximal[a])
        found = []
        if q >= 3 and not mx:
            found.append("(i) not maximal for q >= 3")
        if q == 2:
            if mx != (c <= n - k - 1):
                found.append(f"(ii) maximal={mx} but c(X)={c}")
            if c == n - k and size != 2:
                found.append(f"c(X)=n-k but |S^c(X)|={size}")
            if c == n - k + 1 and size != 1:
                found.append(f"c(X)=n-k+1 but |S^c(X)|={size}")
        if equals_top[a] is not None:
            found.append(f"(iii) S^c(X) = T^c(Y) for Y={equals_top[a]}")
        if found:
            problems[a] = found
    bad = []
    for a, found in problems.items():
        X = to_subspaces(F, anchors[a : a + 1])[0]
        bad.append({"X": X.serialize(), "c": int(zero_cols[a]), "size": int(sizes[a]),
                    "maximal": bool(maximal[a]), "problems": found})
    by_c = {}
    for a in np.flatnonzero(sizes).tolist():
        tally = by_c.setdefault(int(zero_cols[a]), {"maximal": 0, "not_maximal": 0})
        tally["maximal" if maximal[a] else "not_maximal"] += 1
    return _report(
        n, k, q,
        "restricted stars: (i) maximal for q>=3; (ii) for q=2 maximal iff c(X)<=n-k-1; (iii) maximal ones are not restricted tops",
        "S^c(X) is a maximal clique of the non-degenerate graph when q >= 3, and for q = 2 exactly when c(X) <= n-k-1; a maximal S^c(X) is never a T^c(Y)",
        bad,
        anchors_checked=int((sizes > 0).sum()),
        maximal_by_c={str(c): v for c, v in sorted(by_c.items())},
    )


def _star_equals_some_top(g: GraphHandle, fam: np.ndarray, sizes: np.ndarray, maximal: np.ndarray) -> list:
    """For each maximal S^c(X), the serialized Y with T^c(Y) = S^c(X), else None.

    Two distinct members A, B force Y = A + B, so one candidate per anchor is
    checked in a single batch; a lone member A leaves every superspace of A.
    """
    F, k = g.field, g.params.k
    out: list = [None] * len(fam)
    multi = np.flatnonzero(maximal & (sizes >= 2))
    if len(multi):
        rows = np.sort(fam[multi], axis=1)[:, ::-1]  # members first, -1 padding last
        pair = np.concatenate([g.vertex_array[rows[:, 0]], g.vertex_array[rows[:, 1]]], axis=1)
        Y = rref_batch(F, pair)[0][:, : k + 1]
        # set equality needs every member inside Y; test that first, it is far cheaper
        members = g.vertex_array[np.maximum(rows, 0)]
        A_, m_ = rows.shape
        stacked = np.concatenate([np.broadcast_to(Y[:, None], (A_, m_) + Y.shape[1:]), members], axis=2)
        ranks = rref_batch(F, stacked.reshape((A_ * m_,) + stacked.shape[2:]))[1].reshape(A_, m_)
        inside = ((ranks == k + 1) | (rows < 0)).all(axis=1)
        multi, Y = multi[inside], Y[inside]
        tops = restricted_family(g, Y, "top")
        width = max(fam.shape[1], tops.shape[1])
        pad = lambda a: np.sort(np.pad(a, ((0, 0), (0, width - a.shape[1])), constant_values=-1), axis=1)
        same = (pad(fam[multi]) == pad(tops)).all(axis=1)
        for a, y in zip(multi[same].tolist(), to_subspaces(F, Y[same])):
            out[a] = y.serialize()
    for a in np.flatnonzero(maximal & (sizes == 1)).tolist():
        A = g.vertex_array[fam[a][fam[a] >= 0][0]][None]
        cands = superspaces_batch(F, A)[0]
        tops = restricted_family(g, cands, "top")
        for y, row in zip(to_subspaces(F, cands), tops):
            if set(row[row >= 0].tolist()) == set(fam[a][fam[a] >= 0].tolist()):
                out[a] = y.serialize()
                break
    return out


def check_prop_top(n: int, k: int, q: int, graph: GraphHandle | None = None) -> dict:
    """All T^c(Y), Y non-degenerate of dim k+1, maximal  <=>  [k+1]_q - (q+1) > n."""
    _require_range(n, k)
    g = _graph(n, k, q, graph)
    F = g.field
    Ys = grassmannian_array(F, n, k + 1)
    Ys = Ys[(Ys != 0).any(axis=1).all(axis=1)]
    fam = restricted_family(g, Ys, "top")
    bad_rows = np.flatnonzero(~maximal_mask(g, fam))
    defective = []
    for a in bad_rows[:MAX_LISTED].tolist():
        members = fam[a][fam[a] >= 0]
        ext = common_neighbors(g, members) if len(members) else np.zeros(0, dtype=np.int64)
        Y = to_subspaces(F, Ys[a : a + 1])[0]
        entry = {"Y": Y.serialize(), "size": int(len(members))}
        if not len(members):
            entry["reason"] = "empty"
        else:
            Z = int(ext[0])
            entry["reason"] = "not maximal"
            entry["extender"] = g.vertices[Z].serialize()
            anchor = _common_subspace([g.vertices[i] for i in members.tolist() + [Z]])
            if anchor is not None and anchor.k == k - 1:
                star_members = restricted_family(g, anchor.basis[None], "star")[0]
                star_members = star_members[star_members >= 0]
                entry["inside_star_of"] = anchor.serialize()
                entry["star_size"] = int(len(star_members))
                entry["star_is_maximal"] = bool(len(common_neighbors(g, star_members)) == 0)
        defective.append(entry)
    lhs = not len(bad_rows)
    rhs = gaussian_number(k + 1, q) - (q + 1) > n
    problems = []
    if lhs != rhs:
        problems.append({"lhs_all_tops_maximal": lhs, "rhs_inequality": rhs})
    report = _report(
        n, k, q,
        "every T^c(Y) with Y in C(n,k+1)_q is maximal  <=>  [k+1]_q - (q+1) > n",
        "T^c(Y) is a top of the non-degenerate graph for every non-degenerate (k+1)-subspace Y iff [k+1]_q - (q+1) > n",
        problems,
        lhs_all_tops_maximal=lhs,
        rhs_inequality=rhs,
        tops_checked=int(len(Ys)),
        defective_count=int(len(bad_rows)),
        defective_examples=defective[:MAX_LISTED],
    )
    if not rhs and not len(bad_rows):
        report["status"] = "fail"
    return report


def _common_subspace(subs: list[Subspace]) -> Subspace | None:
    cur = subs[0]
    for S in subs[1:]:
        dim, cur = intersect(cur, S)
        if cur is None:
            return None
    return cur


def bron_kerbosch(adjacency: list[set[int]]) -> list[frozenset[int]]:
    """All maximal cliques (Bron-Kerbosch with Tomita pivoting, bitset sets).

    The graph without vertices has no cliques to report.
    """
    if not adjacency:
        return []
    nbr = [0] * len(adjacency)
    for v, ns in enumerate(adjacency):
        for u in ns:
            nbr[v] |= 1 << u
    out: list[frozenset[int]] = []

    def bits(mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def expand(R: list[int], P: int, X: int) -> None:
        if not P and not X:
            out.append(frozenset(R))
            return
        pivot = max(bits(P | X), key=lambda u: (P & nbr[u]).bit_count())
        for v in list(bits(P & ~nbr[pivot])):
            R.append(v)
            expand(R, P & nbr[v], X & nbr[v])
            R.pop()
            P &= ~(1 << v)
            X |= 1 << v

    expand([], (1 << len(adjacency)) - 1, 0)
    return out


def maximal_clique_census(g: GraphHandle, cap: int = CENSUS_VERTEX_CAP) -> dict:
    """Every maximal clique must be some non-empty S^c(X) or T^c(Y)."""
    n, k, q = g.params.n, g.params.k, g.params.q
    if g.num_vertices > cap:
        from .grassmannian import BudgetExceededError

        raise BudgetExceededError(g.num_vertices, cap, "census vertices")
    F = g.field
    catalog: dict[frozenset[int], set[str]] = {}
    for kind, dim in (("star", k - 1), ("top", k + 1)):
        fam = restricted_family(g, grassmannian_array(F, n, dim), kind)
        for row in fam:
            members = frozenset(row[row >= 0].tolist())
            if members:
                catalog.setdefault(members, set()).add(kind)
    cliques = bron_kerbosch(g.adjacency_sets())
    unmatched = []
    kinds = {"star": 0, "top": 0, "both": 0}
    for C in sorted(cliques, key=sorted):
        tags = catalog.get(C)
        if tags is None:
            unmatched.append({"members": [g.vertices[i].serialize() for i in sorted(C)]})
        else:
            kinds["both" if len(tags) == 2 else next(iter(tags))] += 1
    return _report(
        n, k, q,
        "every maximal clique of the non-degenerate graph is a restricted star or restricted top",
        "maximal cliques of the non-degenerate graph are exactly the maximal S^c(X) and T^c(Y)",
        unmatched,
        vertices=g.num_vertices,
        maximal_cliques=len(cliques),
        matched_by_kind=kinds,
    )
