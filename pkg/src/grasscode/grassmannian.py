"""Enumeration and counting of G_k(GF(q)^n), adjacency and Grassmann distance.

Canonical vertex order: pivot sets in colexicographic order, then the free
entries of the RREF basis in lexicographic (row-major) order.  The
:class:`Ranker` inverts this order, turning a stack of RREF bases into their
positions, which is how every batched routine looks up vertices.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .field import FieldSpec
from .linalg import Subspace, matmul_batch, pivot_columns, rref_batch, stacked_rank

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceededError",
    "GrassmannianParams",
    "gaussian_number",
    "gaussian_binomial",
    "pivot_sets",
    "free_cells",
    "grassmannian_array",
    "coefficient_grassmannian",
    "enumerate_grassmannian",
    "Ranker",
    "ranker",
    "to_subspaces",
    "is_adjacent",
    "grassmann_distance",
    "stacked_rank_batch",
    "hyperplanes_batch",
    "superspaces_batch",
]

_FALLBACK_BUDGET = 2_000_000


def _env_budget() -> int:
    raw = os.environ.get("GRASSCODE_BUDGET")
    if raw is None:
        return _FALLBACK_BUDGET
    value = int(raw)
    if value <= 0:
        raise ValueError("GRASSCODE_BUDGET must be positive")
    return value


DEFAULT_BUDGET = _env_budget()


class BudgetExceededError(RuntimeError):
    def __init__(self, required: int, budget: int, what: str = "vertices"):
        super().__init__(f"{what}: {required} required, budget is {budget}")
        self.required = required
        self.budget = budget
        self.what = what

    def __reduce__(self):
        return type(self), (self.required, self.budget, self.what)


def gaussian_number(m: int, q: int) -> int:
    """``[m]_q = (q^m - 1)/(q - 1)``, the number of points of an m-dimensional space."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return (q**m - 1) // (q - 1)


def gaussian_binomial(m: int, k: int, q: int) -> int:
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class GrassmannianParams:
    n: int
    k: int
    field: FieldSpec
    budget: int = field(default_factory=_env_budget, compare=False)

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return gaussian_binomial(self.n, self.k, self.q)

    def check_budget(self) -> None:
        if self.size > self.budget:
            raise BudgetExceededError(self.size, self.budget)

    def __str__(self) -> str:
        return f"(n={self.n}, k={self.k}, q={self.q})"


def pivot_sets(n: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of ``range(n)`` in colexicographic order."""
    return sorted(itertools.combinations(range(n), k), key=lambda s: s[::-1])


def free_cells(pivots: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    """RREF cells ``(row, col)`` that may hold arbitrary values, row-major."""
    pset = set(pivots)
    return [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pset]


def _all_values(q: int, f: int) -> np.ndarray:
    """All length-f digit vectors over ``range(q)``, lexicographic."""
    if f == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    grids = np.indices((q,) * f, dtype=np.uint8)
    return grids.reshape(f, -1).T.copy()


def _build_array(q: int, n: int, k: int) -> np.ndarray:
    blocks = []
    for piv in pivot_sets(n, k):
        cells = free_cells(piv, n)
        vals = _all_values(q, len(cells))
        block = np.zeros((len(vals), k, n), dtype=np.uint8)
        for i, p in enumerate(piv):
            block[:, i, p] = 1
        if cells:
            rows, cols = zip(*cells)
            block[:, list(rows), list(cols)] = vals
        blocks.append(block)
    return np.concatenate(blocks) if blocks else np.zeros((0, k, n), dtype=np.uint8)


@lru_cache(maxsize=32)
def _cached_array(F: FieldSpec, n: int, k: int) -> np.ndarray:
    arr = _build_array(F.q, n, k)
    arr.setflags(write=False)
    return arr


def grassmannian_array(F: FieldSpec, n: int, k: int, budget: int | None = None) -> np.ndarray:
    """All RREF bases of G_k(F^n) in canonical order as a read-only ``(N, k, n)`` array."""
    GrassmannianParams(n, k, F, budget or _env_budget()).check_budget()
    return _cached_array(F, n, k)


def coefficient_grassmannian(F: FieldSpec, m: int, d: int) -> np.ndarray:
    """G_d(F^m) as coefficient matrices, used to enumerate subspaces of a given space."""
    if d == 0:
        return np.zeros((1, 0, m), dtype=np.uint8)
    return _cached_array(F, m, d)


def to_subspaces(F: FieldSpec, arr: np.ndarray) -> list[Subspace]:
    n = arr.shape[-1]
    return [Subspace(F, n, tuple(map(tuple, m))) for m in arr.tolist()]


def enumerate_grassmannian(params: GrassmannianParams) -> Iterator[Subspace]:
    params.check_budget()
    F, n, k = params.field, params.n, params.k
    for piv in pivot_sets(n, k):
        cells = free_cells(piv, n)
        base = [[0] * n for _ in range(k)]
        for i, p in enumerate(piv):
            base[i][p] = 1
        for vals in itertools.product(range(F.q), repeat=len(cells)):
            for (i, c), v in zip(cells, vals):
                base[i][c] = v
            yield Subspace(F, n, tuple(tuple(r) for r in base))


class Ranker:
    """Position of RREF bases within the canonical order of G_k(F^n)."""

    def __init__(self, q: int, n: int, k: int):
        self.q, self.n, self.k = q, n, k
        self._patterns: dict[int, tuple[int, np.ndarray, np.ndarray, np.ndarray]] = {}
        offset = 0
        for piv in pivot_sets(n, k):
            cells = free_cells(piv, n)
            code = sum(1 << p for p in piv)
            rows = np.array([c[0] for c in cells], dtype=np.intp)
            cols = np.array([c[1] for c in cells], dtype=np.intp)
            weights = np.array([q ** (len(cells) - 1 - i) for i in range(len(cells))], dtype=np.int64)
            self._patterns[code] = (offset, rows, cols, weights)
            offset += q ** len(cells)
        self.size = offset

    def rank(self, arr: np.ndarray) -> np.ndarray:
        """Indices of the full-rank RREF bases in ``arr`` (shape ``(B, k, n)``)."""
        arr = np.asarray(arr)
        if arr.shape[1:] != (self.k, self.n):
            raise ValueError(f"expected (*, {self.k}, {self.n}) array, got {arr.shape}")
        out = np.empty(len(arr), dtype=np.int64)
        if len(arr) == 0:
            return out
        codes = (np.int64(1) << pivot_columns(arr).astype(np.int64)).sum(axis=1)
        for code in np.unique(codes):
            idx = np.flatnonzero(codes == code)
            offset, rows, cols, weights = self._patterns[int(code)]
            if len(rows):
                vals = arr[idx][:, rows, cols].astype(np.int64)
                out[idx] = offset + vals @ weights
            else:
                out[idx] = offset
        return out


@lru_cache(maxsize=64)
def ranker(q: int, n: int, k: int) -> Ranker:
    return Ranker(q, n, k)


def _check_same_dim(X: Subspace, Y: Subspace) -> None:
    if X.k != Y.k:
        raise ValueError(f"dimension mismatch: {X.k} vs {Y.k}")


def is_adjacent(X: Subspace, Y: Subspace) -> bool:
    _check_same_dim(X, Y)
    return stacked_rank(X, Y) == X.k + 1


def grassmann_distance(X: Subspace, Y: Subspace) -> int:
    _check_same_dim(X, Y)
    return stacked_rank(X, Y) - X.k


def stacked_rank_batch(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Rank of ``[A_i; B_i]`` for matching stacks of bases."""
    return rref_batch(F, np.concatenate([A, B], axis=1))[1]


def hyperplanes_batch(F: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Every (d-1)-subspace of each d-subspace: ``(B, [d]_q, d-1, n)`` in RREF."""
    nb, d, n = arr.shape
    if d == 1:
        return np.zeros((nb, 1, 0, n), dtype=np.uint8)
    coeffs = coefficient_grassmannian(F, d, d - 1)
    prod = matmul_batch(F, coeffs[None], arr[:, None])
    h = coeffs.shape[0]
    reduced, _ = rref_batch(F, prod.reshape(nb * h, d - 1, n))
    return reduced.reshape(nb, h, d - 1, n)


def superspaces_batch(F: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Every (d+1)-superspace of each d-subspace: ``(B, [n-d]_q, d+1, n)`` in RREF.

    Superspaces of X correspond to points of V/X, represented by points of
    the span of the unit vectors at non-pivot columns.
    """
    nb, d, n = arr.shape
    if d >= n:
        raise ValueError("the full space has no proper superspace")
    is_pivot = np.zeros((nb, n), dtype=bool)
    if d:
        np.put_along_axis(is_pivot, pivot_columns(arr), True, axis=1)
    free = np.argsort(is_pivot, axis=1, kind="stable")[:, : n - d]
    W = np.zeros((nb, n - d, n), dtype=np.uint8)
    np.put_along_axis(W, free[:, :, None], 1, axis=2)
    points = coefficient_grassmannian(F, n - d, 1)
    ext = matmul_batch(F, points[None], W[:, None])
    m = points.shape[0]
    stacked = np.concatenate([np.broadcast_to(arr[:, None], (nb, m, d, n)), ext], axis=2)
    reduced, _ = rref_batch(F, stacked.reshape(nb * m, d + 1, n))
    return reduced.reshape(nb, m, d + 1, n)
