"""Non-degenerate codes, coordinate combinatorics, and the graphs built on them.

Edges are generated from stars rather than by pairwise rank tests: two
distinct k-subspaces are adjacent iff they share a (k-1)-subspace, and that
shared subspace is unique.  Bucketing every vertex under each of its
hyperplanes therefore yields each edge exactly once.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .field import FieldSpec
from .grassmannian import (
    BudgetExceededError,
    GrassmannianParams,
    coefficient_grassmannian,
    gaussian_binomial,
    grassmannian_array,
    hyperplanes_batch,
    ranker,
    stacked_rank_batch,
    to_subspaces,
)
from .linalg import Subspace, canonicalize, intersect, matmul_batch, orthocomplement_batch

__all__ = [
    "VARIANTS",
    "CoordinateProfile",
    "GraphHandle",
    "is_nondegenerate",
    "nondegenerate_mask",
    "coordinate_profile",
    "coordinate_hyperplane",
    "n_count",
    "n_count_batch",
    "count_codes",
    "nondegenerate_array",
    "build_graph",
    "graph_on",
    "connectivity",
    "bfs_distances",
    "gather_neighbors",
    "distance_coincidence_report",
    "distance_threshold",
]

VARIANTS = ("full", "nondeg", "dual-nondeg", "custom-vertex-set")

# pairs are materialised as int64 arrays; keep well under the memory ceiling
EDGE_BUDGET = 60_000_000


@dataclass(frozen=True)
class CoordinateProfile:
    c: int
    support: tuple[int, ...]
    weight: int | None = None


def is_nondegenerate(X: Subspace) -> bool:
    return all(any(row[j] for row in X.rows) for j in range(X.n))


def nondegenerate_mask(arr: np.ndarray) -> np.ndarray:
    return (arr != 0).any(axis=1).all(axis=1)


def coordinate_profile(X: Subspace) -> CoordinateProfile:
    support = tuple(j for j in range(X.n) if any(row[j] for row in X.rows))
    weight = len(support) if X.k == 1 else None
    return CoordinateProfile(c=X.n - len(support), support=support, weight=weight)


def coordinate_hyperplane(F: FieldSpec, n: int, i: int) -> Subspace:
    """``C_i``, the kernel of the i-th coordinate functional (0-based)."""
    rows = [tuple(int(j == m) for m in range(n)) for j in range(n) if j != i]
    return canonicalize(F, rows, n)


def n_count(Y: Subspace) -> int:
    """Number of distinct subspaces among ``Y ∩ C_1, ..., Y ∩ C_n``."""
    if not is_nondegenerate(Y):
        raise ValueError("n_count needs a non-degenerate subspace")
    seen = set()
    for i in range(Y.n):
        _, Z = intersect(Y, coordinate_hyperplane(Y.field, Y.n, i))
        seen.add(Z)
    return len(seen)


def n_count_batch(F: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """``n(Y)`` for a stack of non-degenerate bases.

    ``Y ∩ C_i`` is the kernel of the i-th coordinate functional restricted to
    Y, whose coefficient vector is column i of the basis; two kernels agree
    iff the columns are proportional.  Columns are normalised to a leading 1
    and the distinct ones counted.
    """
    cols = np.swapaxes(arr, 1, 2)  # (B, n, d)
    lead = np.take_along_axis(cols, np.argmax(cols != 0, axis=2)[:, :, None], axis=2)
    normed = F.mul_table[F.inv_table[lead], cols]
    d = arr.shape[1]
    codes = (normed.astype(np.int64) * (F.q ** np.arange(d, dtype=np.int64))).sum(axis=2)
    codes.sort(axis=1)
    return 1 + (np.diff(codes, axis=1) != 0).sum(axis=1)


def count_codes(n: int, k: int, q: int) -> int:
    """``|C(n,k)_q|`` by inclusion-exclusion over coordinate subspaces."""
    return sum((-1) ** j * math.comb(n, j) * gaussian_binomial(n - j, k, q) for j in range(n - k + 1))


def nondegenerate_array(F: FieldSpec, n: int, k: int, budget: int | None = None) -> np.ndarray:
    arr = grassmannian_array(F, n, k, budget)
    return arr[nondegenerate_mask(arr)]


@dataclass
class GraphHandle:
    """Materialised vertex stack plus CSR adjacency (symmetric, no loops)."""

    params: GrassmannianParams
    variant: str
    vertex_array: np.ndarray = field(repr=False)
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.params.field

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_array)

    def __len__(self) -> int:
        return self.num_vertices

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def vertices(self) -> list[Subspace]:
        return to_subspaces(self.field, self.vertex_array)

    @cached_property
    def _ranks(self) -> tuple[np.ndarray, np.ndarray]:
        r = ranker(self.field.q, self.params.n, self.params.k).rank(self.vertex_array)
        order = np.argsort(r, kind="stable")
        return r[order], order

    def lookup(self, arr: np.ndarray) -> np.ndarray:
        """Vertex index of each RREF basis in ``arr``; -1 when it is not a vertex."""
        sorted_ranks, order = self._ranks
        r = ranker(self.field.q, self.params.n, self.params.k).rank(arr)
        pos = np.searchsorted(sorted_ranks, r)
        pos = np.minimum(pos, len(sorted_ranks) - 1)
        hit = sorted_ranks[pos] == r if len(sorted_ranks) else np.zeros(len(r), bool)
        return np.where(hit, order[pos], -1)

    def index(self, X: Subspace) -> int:
        if X.n != self.params.n or X.k != self.params.k or X.field != self.field:
            return -1
        return int(self.lookup(X.basis[None])[0])

    def __contains__(self, X: Subspace) -> bool:
        return self.index(X) >= 0

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        pos = np.searchsorted(row, j)
        return bool(pos < len(row) and row[pos] == j)

    @cached_property
    def _edges(self) -> np.ndarray:
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees())
        dst = self.indices.astype(np.int64)
        keep = src < dst
        e = np.stack([src[keep], dst[keep]], axis=1)
        e.setflags(write=False)
        return e

    @cached_property
    def _edge_codes(self) -> np.ndarray:
        c = self._edges[:, 0] * self.num_vertices + self._edges[:, 1]
        c.setflags(write=False)
        return c

    def edge_array(self) -> np.ndarray:
        """``(E, 2)`` array of edges ``i < j``, sorted (read-only)."""
        return self._edges

    def edge_codes(self) -> np.ndarray:
        """Sorted ``i * N + j`` codes of the edges ``i < j`` (read-only)."""
        return self._edge_codes

    @cached_property
    def directed_codes(self) -> np.ndarray:
        """Sorted ``i * N + j`` codes of both orientations of every edge."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees())
        return src * self.num_vertices + self.indices

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.neighbors(i).tolist()) for i in range(self.num_vertices)]

    @property
    def complete_regime(self) -> bool:
        return self.params.k in (1, self.params.n - 1)


def _csr(num_vertices: int, pairs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int32)
    counts = np.bincount(src, minlength=num_vertices)
    indptr = np.zeros(num_vertices + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def _pairs_within_groups(members: np.ndarray, group_ids: np.ndarray) -> np.ndarray:
    """All unordered pairs of members sharing a group id."""
    order = np.argsort(group_ids, kind="stable")
    members, group_ids = members[order], group_ids[order]
    _, starts, sizes = np.unique(group_ids, return_index=True, return_counts=True)
    total = int((sizes * (sizes - 1) // 2).sum())
    if total > EDGE_BUDGET:
        raise BudgetExceededError(total, EDGE_BUDGET, "edges")
    out = []
    for s in np.unique(sizes):
        if s < 2:
            continue
        block = members[starts[sizes == s][:, None] + np.arange(s)]
        iu, ju = np.triu_indices(s, 1)
        out.append(np.stack([block[:, iu].ravel(), block[:, ju].ravel()], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(out).astype(np.int64)


def _adjacency_pairs(F: FieldSpec, arr: np.ndarray) -> np.ndarray:
    N, k, n = arr.shape
    if N < 2:
        return np.zeros((0, 2), dtype=np.int64)
    if k == 1:
        return _pairs_within_groups(np.arange(N), np.zeros(N, dtype=np.int64))
    hyper = hyperplanes_batch(F, arr)
    h = hyper.shape[1]
    anchors = ranker(F.q, n, k - 1).rank(hyper.reshape(N * h, k - 1, n))
    members = np.repeat(np.arange(N, dtype=np.int64), h)
    return _pairs_within_groups(members, anchors)


def graph_on(params: GrassmannianParams, vertex_array: np.ndarray, variant: str = "custom-vertex-set") -> GraphHandle:
    """Restriction of the Grassmann graph to the given vertex stack (order kept)."""
    vertex_array = np.ascontiguousarray(vertex_array, dtype=np.uint8)
    if len(vertex_array) > params.budget:
        raise BudgetExceededError(len(vertex_array), params.budget)
    pairs = _adjacency_pairs(params.field, vertex_array)
    indptr, indices = _csr(len(vertex_array), pairs)
    return GraphHandle(params, variant, vertex_array, indptr, indices)


def _dual_nondeg_array(F: FieldSpec, n: int, k: int, budget: int) -> np.ndarray:
    nd = nondegenerate_array(F, n, k, budget)
    duals = orthocomplement_batch(F, nd)
    return duals[np.argsort(ranker(F.q, n, k).rank(duals), kind="stable")]


def build_graph(params: GrassmannianParams, variant: str = "full") -> GraphHandle:
    params.check_budget()
    F, n, k = params.field, params.n, params.k
    if variant == "full":
        arr = grassmannian_array(F, n, k, params.budget)
    elif variant == "nondeg":
        arr = nondegenerate_array(F, n, k, params.budget)
    elif variant == "dual-nondeg":
        if n != 2 * k:
            raise ValueError(f"dual-nondeg variant needs n = 2k, got n={n}, k={k}")
        arr = _dual_nondeg_array(F, n, k, params.budget)
    else:
        raise ValueError(f"unknown variant {variant!r}; use graph_on for custom vertex sets")
    return graph_on(params, arr, variant)


def gather_neighbors(g: GraphHandle, nodes: np.ndarray) -> np.ndarray:
    starts = g.indptr[nodes]
    lens = g.indptr[nodes + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    offsets = np.repeat(starts - np.concatenate([[0], np.cumsum(lens)[:-1]]), lens)
    return g.indices[offsets + np.arange(total)]


def bfs_distances(g: GraphHandle, source: int) -> np.ndarray:
    """Path distances from ``source``; -1 marks unreachable vertices."""
    dist = np.full(g.num_vertices, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while len(frontier):
        level += 1
        nxt = gather_neighbors(g, frontier)
        nxt = np.unique(nxt[dist[nxt] < 0])
        dist[nxt] = level
        frontier = nxt
    return dist


def connectivity(g: GraphHandle) -> int:
    """Number of connected components."""
    seen = np.zeros(g.num_vertices, dtype=bool)
    components = 0
    for s in range(g.num_vertices):
        if not seen[s]:
            components += 1
            seen |= bfs_distances(g, s) >= 0
    return components


def distance_threshold(k: int, q: int) -> int:
    """Path distances in the non-degenerate graph agree with the Grassmann
    distances exactly when ``n`` is below this value."""
    return (q + 1) ** 2 + k - 2


def witness_source_order(g: GraphHandle) -> np.ndarray:
    """BFS sources for the witness search, most promising first.

    A vertex far from its neighbours in the non-degenerate graph has every
    point lying in many coordinate hyperplanes, so sources are ranked by the
    smallest ``c(P)`` over the points ``P`` of the vertex (descending), ties
    broken by the number of single-entry RREF columns (descending).
    """
    F, k = g.field, g.params.k
    coeffs = coefficient_grassmannian(F, k, 1)
    pts = matmul_batch(F, coeffs[None], g.vertex_array[:, None])  # (N, [k]_q, 1, n)
    min_c = (pts[:, :, 0, :] == 0).sum(axis=2).min(axis=1)
    unit_cols = ((g.vertex_array != 0).sum(axis=1) == 1).sum(axis=1)
    return np.lexsort((-unit_cols, -min_c))


def distance_coincidence_report(
    params: GrassmannianParams,
    graph: GraphHandle | None = None,
    max_sources: int = 5000,
    time_budget: float | None = None,
    stop_at_witness: bool = True,
) -> dict:
    """Compare BFS distances in the non-degenerate graph with Grassmann distances.

    Every vertex is a BFS source when there are at most ``max_sources``
    vertices; otherwise the first ``max_sources`` in witness-search order.
    """
    g = graph if graph is not None else build_graph(params, "nondeg")
    F, k = params.field, params.k
    order = witness_source_order(g)
    exhaustive = g.num_vertices <= max_sources
    sources = order if exhaustive else order[:max_sources]
    started = time.monotonic()
    witness = None
    checked = 0
    timed_out = False
    for s in sources.tolist():
        if time_budget is not None and time.monotonic() - started > time_budget:
            timed_out = True
            break
        path = bfs_distances(g, s)
        base = np.broadcast_to(g.vertex_array[s], g.vertex_array.shape)
        gdist = stacked_rank_batch(F, base, g.vertex_array) - k
        checked += 1
        bad = np.flatnonzero((path < 0) | (path > gdist))
        if len(bad) and witness is None:
            t = int(bad[0])
            witness = {
                "X": g.vertices[s].serialize(),
                "Y": g.vertices[t].serialize(),
                "indices": [s, t],
                "path_distance": int(path[t]),
                "grassmann_distance": int(gdist[t]),
            }
            if stop_at_witness:
                break
    threshold = distance_threshold(k, params.q)
    return {
        "params": {"n": params.n, "k": k, "q": params.q},
        "vertices": g.num_vertices,
        "edges": g.num_edges,
        "threshold": threshold,
        "predicted_coincides": params.n < threshold,
        "coincides": witness is None,
        "witness": witness,
        "sources_checked": checked,
        "exhaustive": exhaustive and not timed_out and (witness is None or not stop_at_witness),
        "timed_out": timed_out,
    }
