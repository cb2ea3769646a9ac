"""Explicit vertex maps and verdicts on adjacency preservation.

Vectors are rows, so a semilinear map acts as ``x -> sigma(x) @ M`` with
``sigma`` applied entrywise.  Composition therefore twists the inner matrix:
``(M2, s2) o (M1, s1) = (s2(M1) @ M2, s2 s1)``.

The second half builds the q = 2, k = 2 counterexample: a map ``h`` on the
non-degenerate 2-subspaces that fixes the classes A and B, sends each X in
class C to its "complement" X^c inside the hyperplane H, preserves adjacency
and yet maps a non-adjacent pair to an adjacent one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .codegraph import GraphHandle, _csr, build_graph, is_nondegenerate
from .field import FieldSpec, gf
from .grassmannian import GrassmannianParams, ranker, stacked_rank_batch, to_subspaces
from .linalg import (
    Subspace,
    canonicalize,
    contains,
    intersect,
    matmul_batch,
    orthocomplement_batch,
    rref,
    rref_batch,
    subspace_sum,
)

__all__ = [
    "SemilinearMap",
    "MonomialMap",
    "VertexMapVerdict",
    "random_monomial",
    "apply_map",
    "apply_map_batch",
    "evaluate_vertex_map",
    "verify_automorphism",
    "orthocomplement_map_check",
    "p_subspace",
    "hyperplane_H",
    "classify_ABC",
    "x_complement",
    "h_map",
    "witness_pair",
    "CounterexampleResult",
    "verify_counterexample",
]

EXTENDABLE = "extendable-candidate"
NOT_EXTENDABLE = "provably-not-extendable"

# all-pairs evaluation of a non-self map is quadratic
PAIRWISE_LIMIT = 4000


@dataclass(frozen=True)
class SemilinearMap:
    field: FieldSpec
    matrix: np.ndarray = field(repr=False, compare=False)
    sigma: int = 0

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.uint8)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("matrix must be square")
        if len(rref(self.field, M.tolist(), M.shape[1])[0]) != M.shape[0]:
            raise ValueError("matrix is singular")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "sigma", self.sigma % self.field.e)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def compose(self, inner: "SemilinearMap") -> "SemilinearMap":
        """``self o inner``."""
        twisted = self.field.frobenius(self.sigma)[inner.matrix]
        M = matmul_batch(self.field, twisted, self.matrix)
        return SemilinearMap(self.field, M, self.sigma + inner.sigma)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SemilinearMap)
            and self.field == other.field
            and self.sigma == other.sigma
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.sigma, self.matrix.tobytes()))


@dataclass(frozen=True)
class MonomialMap:
    """``e_i -> scalars[i] * e_{perm[i]}`` (0-based), followed by nothing else;
    the field automorphism acts on coordinates first."""

    field: FieldSpec
    perm: tuple[int, ...]
    scalars: tuple[int, ...]
    sigma: int = 0

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.scalars) != len(self.perm) or any(not 0 < s < self.field.q for s in self.scalars):
            raise ValueError("scalars must be non-zero field elements, one per coordinate")

    @property
    def n(self) -> int:
        return len(self.perm)

    def to_semilinear(self) -> SemilinearMap:
        M = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, (j, s) in enumerate(zip(self.perm, self.scalars)):
            M[i, j] = s
        return SemilinearMap(self.field, M, self.sigma)

    def compose(self, inner: "MonomialMap") -> "MonomialMap":
        """``self o inner``: e_i -> frob(a_i) * b_{p(i)} e_{r(p(i))}."""
        frob = self.field.frobenius(self.sigma)
        perm = tuple(self.perm[inner.perm[i]] for i in range(self.n))
        scalars = tuple(
            int(self.field.mul_table[frob[inner.scalars[i]], self.scalars[inner.perm[i]]]) for i in range(self.n)
        )
        return MonomialMap(self.field, perm, scalars, (self.sigma + inner.sigma) % self.field.e)


def random_monomial(F: FieldSpec, n: int, rng: np.random.Generator) -> MonomialMap:
    perm = tuple(int(x) for x in rng.permutation(n))
    scalars = tuple(int(x) for x in rng.integers(1, F.q, size=n))
    return MonomialMap(F, perm, scalars, int(rng.integers(0, F.e)))


def _semilinear(m) -> SemilinearMap:
    return m.to_semilinear() if isinstance(m, MonomialMap) else m


def apply_map_batch(m, arr: np.ndarray) -> np.ndarray:
    """Images of a stack of RREF bases, in RREF."""
    m = _semilinear(m)
    if arr.shape[-1] != m.n:
        raise ValueError(f"map on F^{m.n} applied to subspaces of F^{arr.shape[-1]}")
    twisted = m.field.frobenius(m.sigma)[arr]
    return rref_batch(m.field, matmul_batch(m.field, twisted, m.matrix))[0]


def apply_map(m, X: Subspace) -> Subspace:
    m = _semilinear(m)
    if X.field != m.field or X.n != m.n:
        raise ValueError("map and subspace live in different spaces")
    frob = m.field.frobenius(m.sigma)
    rows = matmul_batch(m.field, frob[X.basis], m.matrix)
    return canonicalize(m.field, rows.tolist(), X.n)


@dataclass
class VertexMapVerdict:
    map_kind: str
    params: dict
    injective: bool
    self_map: bool
    adjacency_forward: bool
    adjacency_both: bool
    witness_onedir: dict | None = None
    extendable_conclusion: str = EXTENDABLE

    def __post_init__(self):
        self.extendable_conclusion = NOT_EXTENDABLE if self.witness_onedir else EXTENDABLE

    @property
    def is_automorphism(self) -> bool:
        return self.self_map and self.injective and self.adjacency_both

    def to_json(self) -> dict:
        return {
            "map_kind": self.map_kind,
            "params": self.params,
            "injective": self.injective,
            "self_map": self.self_map,
            "adjacency_forward": self.adjacency_forward,
            "adjacency_both": self.adjacency_both,
            "witness": self.witness_onedir,
            "conclusion": self.extendable_conclusion,
        }


def _witness(g: GraphHandle, images: np.ndarray, i: int, j: int) -> dict:
    hX, hY = to_subspaces(g.field, images[[i, j]])
    return {"X": g.vertices[i].serialize(), "Y": g.vertices[j].serialize(), "hX": hX.serialize(), "hY": hY.serialize()}


def evaluate_vertex_map(g: GraphHandle, images: np.ndarray, map_kind: str) -> VertexMapVerdict:
    """Verdict for the vertex map ``i -> images[i]`` (RREF bases of the same dimension)."""
    F, n, k = g.field, g.params.n, g.params.k
    N = g.num_vertices
    params = {"n": n, "k": k, "q": F.q}
    ranks = ranker(F.q, n, k).rank(images)
    injective = len(np.unique(ranks)) == N
    targets = g.lookup(images)
    self_map = bool((targets >= 0).all())
    edges = g.edge_array()
    if self_map and injective:
        # a bijection preserving edges injects E into E, hence onto: both directions follow
        t = targets.astype(np.int32 if N * N < 2**31 else np.int64)
        a, b = t[edges[:, 0]], t[edges[:, 1]]
        mapped = np.minimum(a, b) * t.dtype.type(N) + np.maximum(a, b)
        mapped.sort()
        both = bool(np.array_equal(mapped, g.edge_codes()))
        forward = both or bool(np.isin(mapped, g.edge_codes()).all())
        return VertexMapVerdict(map_kind, params, injective, self_map, forward, both)
    if N > PAIRWISE_LIMIT:
        raise ValueError(f"pairwise evaluation limited to {PAIRWISE_LIMIT} vertices")
    iu, ju = np.triu_indices(N, 1)
    img_adj = stacked_rank_batch(F, images[iu], images[ju]) == k + 1
    dom_adj = np.zeros(len(iu), dtype=bool)
    # triu pair (i, j) has flat position i*N - i*(i+1)/2 + (j - i - 1)
    pos = edges[:, 0] * N - edges[:, 0] * (edges[:, 0] + 1) // 2 + (edges[:, 1] - edges[:, 0] - 1)
    dom_adj[pos] = True
    forward = bool(img_adj[dom_adj].all())
    onedir = np.flatnonzero(~dom_adj & img_adj)
    both = forward and not len(onedir)
    witness = _witness(g, images, int(iu[onedir[0]]), int(ju[onedir[0]])) if len(onedir) else None
    return VertexMapVerdict(map_kind, params, injective, self_map, forward, both, witness)


def verify_automorphism(m, g: GraphHandle) -> VertexMapVerdict:
    kind = "monomial" if isinstance(m, MonomialMap) else "semilinear"
    return evaluate_vertex_map(g, apply_map_batch(m, g.vertex_array), kind)


def _default_graph(n: int, k: int, q: int, variant: str) -> GraphHandle:
    return build_graph(GrassmannianParams(n, k, gf(q)), variant)


def orthocomplement_map_check(n: int, k: int, q: int, graph_fn=_default_graph) -> dict:
    """``X -> X^perp`` as an isomorphism Gamma_k -> Gamma_{n-k}; for n = 2k also
    non-degenerate graph -> dual-non-degenerate graph.

    ``graph_fn(n, k, q, variant)`` supplies the graphs, so callers can share a cache.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    F = gf(q)
    src = graph_fn(n, k, q, "full")
    dst = src if n == 2 * k else graph_fn(n, n - k, q, "full")
    perp = orthocomplement_batch(F, src.vertex_array)
    back = orthocomplement_batch(F, perp)
    problems = []
    if not np.array_equal(back, src.vertex_array):
        problems.append("X^perp^perp != X for some X")
    targets = dst.lookup(perp)
    bijective = bool((targets >= 0).all()) and len(np.unique(targets)) == src.num_vertices == dst.num_vertices
    if not bijective:
        problems.append("orthocomplement is not a bijection G_k -> G_{n-k}")
    e = src.edge_array()
    a, b = targets[e[:, 0]], targets[e[:, 1]]
    mapped = np.sort(np.minimum(a, b) * dst.num_vertices + np.maximum(a, b))
    adjacency_both = bijective and np.array_equal(mapped, dst.edge_codes())
    if not adjacency_both:
        problems.append("adjacency not preserved in both directions")
    report = {
        "params": {"n": n, "k": k, "q": q},
        "assertion": "X,Y adjacent <=> X^perp,Y^perp adjacent; X^perp^perp = X",
        "claim": "the orthocomplementary map is an isomorphism between the Grassmann graphs of k- and (n-k)-subspaces",
        "vertices": src.num_vertices,
        "edges": src.num_edges,
        "bijective": bijective,
        "adjacency_both": bool(adjacency_both),
    }
    if n == 2 * k:
        nd = graph_fn(n, k, q, "nondeg")
        dual = graph_fn(n, k, q, "dual-nondeg")
        img = dual.lookup(orthocomplement_batch(F, nd.vertex_array))
        injective = len(np.unique(img)) == nd.num_vertices
        onto_dual = bool((img >= 0).all()) and injective and dual.num_vertices == nd.num_vertices
        e = nd.edge_array()
        a, b = img[e[:, 0]], img[e[:, 1]]
        iso = onto_dual and np.array_equal(np.sort(np.minimum(a, b) * dual.num_vertices + np.maximum(a, b)), dual.edge_codes())
        report["dual_nondeg"] = {
            "vertices": dual.num_vertices,
            "image_equals_dual_vertex_set": onto_dual,
            "isomorphism": bool(iso),
            "injective": injective,
        }
        if not (onto_dual and iso):
            problems.append("non-degenerate graph not mapped isomorphically onto the dual-non-degenerate graph")
    report["status"] = "fail" if problems else "pass"
    report["counterexamples"] = problems
    return report


# --- the q = 2, k = 2 construction ---------------------------------------
# Index sets below are 1-based, matching the usual P_I notation.

_F2 = None


def _f2() -> FieldSpec:
    global _F2
    if _F2 is None:
        _F2 = gf(2)
    return _F2


def _indicator(I: Iterable[int], n: int) -> tuple[int, ...]:
    I = set(I)
    if not I:
        raise ValueError("index set must be non-empty")
    if not I <= set(range(1, n + 1)):
        raise ValueError(f"indices must lie in 1..{n}")
    return tuple(int(i + 1 in I) for i in range(n))


def p_subspace(I: Iterable[int], n: int) -> Subspace:
    """``P_I``: the point spanned by the indicator vector of ``I`` over GF(2)."""
    return canonicalize(_f2(), [_indicator(I, n)], n)


def _support(P: Subspace) -> frozenset[int]:
    return frozenset(j + 1 for j, x in enumerate(P.rows[0]) if x)


def hyperplane_H(n: int) -> Subspace:
    """Span of ``P_I`` over the (n-1)-subsets I containing n."""
    if n < 4:
        raise ValueError("the construction needs n >= 4")
    full = set(range(1, n + 1))
    H = canonicalize(_f2(), [_indicator(full - {j}, n) for j in range(1, n)], n)
    if H.k != n - 1:
        raise AssertionError(f"H has dimension {H.k}, expected {n - 1}")
    return H


def _all_ones(n: int) -> tuple[int, ...]:
    return (1,) * n


def _check_domain(X: Subspace) -> None:
    if X.q != 2 or X.k != 2 or not is_nondegenerate(X):
        raise ValueError(f"{X!r} is not a non-degenerate 2-subspace over GF(2)")


def classify_ABC(X: Subspace) -> str:
    _check_domain(X)
    if contains(X, _all_ones(X.n)):
        return "A"
    if X <= hyperplane_H(X.n):
        return "B"
    return "C"


def _outside_points(X: Subspace, H: Subspace) -> list[Subspace]:
    return [P for P in X.points() if not contains(H, P.rows[0])]


def x_complement(X: Subspace) -> Subspace:
    """``X^c = P_{I^c} + P_{J^c}`` where ``P_I, P_J`` are the points of X outside H."""
    if classify_ABC(X) != "C":
        raise ValueError("x_complement is defined on class C only")
    n = X.n
    full = frozenset(range(1, n + 1))
    outside = _outside_points(X, hyperplane_H(n))
    if len(outside) != 2:
        raise AssertionError(f"class-C subspace with {len(outside)} points outside H")
    I, J = (_support(P) for P in outside)
    if I | J != full:
        raise AssertionError(f"supports {sorted(I)} and {sorted(J)} do not cover 1..{n}")
    return subspace_sum(p_subspace(full - I, n), p_subspace(full - J, n))


def h_map(X: Subspace) -> Subspace:
    return x_complement(X) if classify_ABC(X) == "C" else X


def witness_pair(n: int) -> tuple[Subspace, Subspace]:
    """``X = P_{1,3..n} + P_{2..n}`` and ``Y = P_{1,2,4..n} + P_{3..n}``."""
    rest = set(range(4, n + 1))
    X = subspace_sum(p_subspace({1, 3} | rest, n), p_subspace({2, 3} | rest, n))
    Y = subspace_sum(p_subspace({1, 2} | rest, n), p_subspace({3} | rest, n))
    return X, Y


@dataclass
class CounterexampleResult:
    verdict: VertexMapVerdict
    domain: GraphHandle
    repaired: GraphHandle
    classes: dict[str, int]
    checks: dict[str, bool]
    certificate: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        out = self.verdict.to_json()
        out.update(
            {
                "classes": self.classes,
                "checks": self.checks,
                "repaired_subgraph": {"vertices": self.repaired.num_vertices, "edges": self.repaired.num_edges},
                "status": "pass" if self.ok else "fail",
            }
        )
        return out


def verify_counterexample(n: int) -> CounterexampleResult:
    if n < 4:
        raise ValueError("the construction needs n >= 4")
    F = _f2()
    params = GrassmannianParams(n, 2, F)
    g = build_graph(params, "nondeg")
    H = hyperplane_H(n)
    full = frozenset(range(1, n + 1))
    labels = [classify_ABC(X) for X in g.vertices]
    images = [h_map(X) for X, c in zip(g.vertices, labels)]
    image_arr = np.array([Y.rows for Y in images], dtype=np.uint8)
    checks: dict[str, bool] = {"all_ones_outside_H": not contains(H, _all_ones(n))}

    in_C = [i for i, c in enumerate(labels) if c == "C"]
    checks["class_C_images_degenerate"] = all(not is_nondegenerate(images[i]) for i in in_C)
    checks["class_C_images_inside_H"] = all(images[i] <= H for i in in_C)
    meet_ok = True
    for i in in_C:
        X = g.vertices[i]
        I, J = (_support(P) for P in _outside_points(X, H))
        dim, meet = intersect(X, images[i])
        meet_ok &= dim == 1 and meet == p_subspace((full - I) | (full - J), n)
    checks["X_meet_Xc_is_P_of_union_of_complements"] = meet_ok

    verdict = evaluate_vertex_map(g, image_arr, "h")
    checks["injective"] = verdict.injective
    checks["adjacency_forward"] = verdict.adjacency_forward
    checks["not_adjacency_both"] = not verdict.adjacency_both

    X, Y = witness_pair(n)
    hX, hY = h_map(X), h_map(Y)
    checks["witness_in_domain"] = X in g and Y in g
    checks["witness_classes_B_C"] = classify_ABC(X) == "B" and classify_ABC(Y) == "C"
    checks["witness_nonadjacent"] = intersect(X, Y)[0] == 0
    checks["witness_images_adjacent"] = intersect(hX, hY)[0] == 1
    verdict.witness_onedir = {"X": X.serialize(), "Y": Y.serialize(), "hX": hX.serialize(), "hY": hY.serialize()}
    verdict.extendable_conclusion = NOT_EXTENDABLE

    # repaired subgraph: image vertices, edges pulled back from the domain
    indptr, indices = _csr(g.num_vertices, g.edge_array())
    repaired = GraphHandle(params, "custom-vertex-set", image_arr, indptr, indices)
    re = repaired.edge_array()
    checks["repaired_edges_are_grassmann_edges"] = bool(
        (stacked_rank_batch(F, image_arr[re[:, 0]], image_arr[re[:, 1]]) == 3).all()
    )
    inverse = {images[i]: i for i in range(g.num_vertices)}
    pulled = sorted(tuple(sorted((inverse[repaired.vertices[a]], inverse[repaired.vertices[b]]))) for a, b in re.tolist())
    checks["repaired_isomorphic_via_h"] = len(inverse) == g.num_vertices and pulled == [tuple(e) for e in g.edge_array().tolist()]
    certificate = [(g.vertices[i].serialize(), images[i].serialize()) for i in range(g.num_vertices)]
    classes = {c: labels.count(c) for c in "ABC"}
    return CounterexampleResult(verdict, g, repaired, classes, checks, certificate)
