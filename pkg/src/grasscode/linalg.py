"""Vectors, matrices and subspaces over GF(q).

Two layers live here.  :class:`Subspace` is the user-facing value type: an
immutable reduced-row-echelon basis, compared and hashed by its entries, with
scalar lattice operations written as plain Python loops over table lookups
(for 2-4 row matrices this beats numpy's per-call overhead).  The ``*_batch``
functions operate on ``(B, rows, n)`` uint8 arrays and carry the exhaustive
suites, where tens of thousands of subspaces are reduced at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .field import FieldMismatchError, FieldSpec

__all__ = [
    "Subspace",
    "ZeroSubspaceError",
    "AmbientMismatchError",
    "rref",
    "canonicalize",
    "nullspace",
    "subspace_sum",
    "intersect",
    "orthocomplement",
    "contains",
    "span",
    "rref_batch",
    "matmul_batch",
    "pivot_columns",
    "orthocomplement_batch",
    "format_element",
    "parse_element",
    "parse_subspace",
]

Vector = tuple[int, ...]

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class ZeroSubspaceError(ValueError):
    """The zero subspace has no :class:`Subspace` representation."""


class AmbientMismatchError(ValueError):
    pass


def rref(F: FieldSpec, rows: Iterable[Sequence[int]], n: int | None = None) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form of ``rows``; zero rows are dropped."""
    M = [list(r) for r in rows]
    if n is None:
        n = len(M[0]) if M else 0
    T = F.lists
    mul, sub, inv = T.mul, T.sub, T.inv
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == len(M):
            break
        for i in range(r, len(M)):
            if M[i][c]:
                break
        else:
            continue
        M[r], M[i] = M[i], M[r]
        piv = M[r]
        if piv[c] != 1:
            scale = mul[inv[piv[c]]]
            piv = [scale[x] for x in piv]
            M[r] = piv
        for j in range(len(M)):
            f = M[j][c]
            if j != r and f:
                mf = mul[f]
                M[j] = [sub[x][mf[y]] for x, y in zip(M[j], piv)]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in M[:r]], pivots


def nullspace(F: FieldSpec, rows: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    R, pivots = rref(F, rows, n)
    neg = F.lists.neg
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [0] * n
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = neg[R[i][f]]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subspace:
    """A nonzero subspace of GF(q)^n held as its unique RREF basis.

    Build instances with :func:`canonicalize` (or :meth:`from_rows`); the
    constructor trusts that ``rows`` is already reduced.
    """

    field: FieldSpec
    n: int
    rows: tuple[Vector, ...]

    @classmethod
    def from_rows(cls, F: FieldSpec, rows: Iterable[Sequence[int]], n: int | None = None) -> "Subspace":
        return canonicalize(F, rows, n)

    @property
    def k(self) -> int:
        return len(self.rows)

    dim = k

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    @property
    def basis(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8).reshape(self.k, self.n)

    def _sort_key(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def __lt__(self, other: "Subspace") -> bool:
        return (self.n, self.k, self._sort_key()) < (other.n, other.k, other._sort_key())

    def __contains__(self, v: Sequence[int]) -> bool:
        return contains(self, v)

    def __le__(self, other: "Subspace") -> bool:
        """Subspace inclusion."""
        _check_ambient(self, other)
        return all(contains(other, r) for r in self.rows)

    def sum(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def intersect(self, other: "Subspace") -> tuple[int, "Subspace | None"]:
        return intersect(self, other)

    def perp(self) -> "Subspace":
        return orthocomplement(self)

    def points(self) -> list["Subspace"]:
        """All 1-dimensional subspaces contained in this one."""
        from .grassmannian import coefficient_grassmannian

        out = []
        for coeffs in coefficient_grassmannian(self.field, self.k, 1):
            out.append(canonicalize(self.field, [_combine(self.field, coeffs[0], self.rows)], self.n))
        return out

    def serialize(self) -> str:
        """Rows as digit strings separated by single spaces."""
        return " ".join("".join(_DIGITS[x] for x in r) for r in self.rows)

    def to_lines(self) -> list[str]:
        return ["".join(_DIGITS[x] for x in r) for r in self.rows]

    def __str__(self) -> str:
        return f"<{self.serialize()}>"

    def __repr__(self) -> str:
        return f"Subspace(GF({self.q}), n={self.n}, [{self.serialize()}])"


def _combine(F: FieldSpec, coeffs: Sequence[int], rows: Sequence[Vector]) -> Vector:
    T = F.lists
    out = [0] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            mc = T.mul[c]
            out = [T.add[x][mc[y]] for x, y in zip(out, r)]
    return tuple(out)


def span(F: FieldSpec, *vectors: Sequence[int]) -> Subspace:
    return canonicalize(F, vectors)


def canonicalize(F: FieldSpec, rows: Iterable[Sequence[int]], n: int | None = None) -> Subspace:
    rows = [tuple(int(x) for x in r) for r in rows]
    if not rows:
        raise ZeroSubspaceError("zero subspace not representable")
    if n is None:
        n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("rows must have a common length")
    if any(not 0 <= x < F.q for r in rows for x in r):
        raise ValueError(f"entries must be element indices of {F}")
    R, _ = rref(F, rows, n)
    if not R:
        raise ZeroSubspaceError("zero subspace not representable")
    return Subspace(F, n, tuple(R))


def _check_ambient(X: Subspace, Y: Subspace) -> None:
    if X.field != Y.field:
        raise FieldMismatchError(f"subspaces over {X.field} and {Y.field}")
    if X.n != Y.n:
        raise AmbientMismatchError(f"ambient dimensions {X.n} and {Y.n} differ")


def subspace_sum(X: Subspace, Y: Subspace) -> Subspace:
    _check_ambient(X, Y)
    R, _ = rref(X.field, X.rows + Y.rows, X.n)
    return Subspace(X.field, X.n, tuple(R))


def stacked_rank(X: Subspace, Y: Subspace) -> int:
    _check_ambient(X, Y)
    return len(rref(X.field, X.rows + Y.rows, X.n)[0])


def intersect(X: Subspace, Y: Subspace) -> tuple[int, Subspace | None]:
    """``(dim, X ∩ Y)``; the subspace is ``None`` when the intersection is zero.

    Solves ``a·A = b·B`` through the left kernel of the stacked bases, so it
    does not depend on the bilinear form being anisotropic.
    """
    _check_ambient(X, Y)
    F = X.field
    stacked = X.rows + Y.rows
    m = len(stacked)
    # columns of the stacked matrix are the equations for the coefficient vector (a, b)
    transposed = [tuple(row[j] for row in stacked) for j in range(X.n)]
    kernel = nullspace(F, transposed, m)
    if not kernel:
        return 0, None
    vecs = [_combine(F, coeffs[: X.k], X.rows) for coeffs in kernel]
    Z = canonicalize(F, vecs, X.n)
    return Z.k, Z


def orthocomplement(X: Subspace) -> Subspace:
    """Orthogonal complement for the standard dot product."""
    basis = nullspace(X.field, X.rows, X.n)
    if not basis:
        raise ZeroSubspaceError("orthocomplement of the full space is zero")
    return canonicalize(X.field, basis, X.n)


def contains(X: Subspace, v: Sequence[int]) -> bool:
    if len(v) != X.n:
        raise AmbientMismatchError(f"vector of length {len(v)} in ambient dimension {X.n}")
    T = X.field.lists
    res = [int(x) for x in v]
    for row, p in zip(X.rows, X.pivots):
        f = res[p]
        if f:
            mf = T.mul[f]
            res = [T.sub[x][mf[y]] for x, y in zip(res, row)]
    return not any(res)


def format_element(a: int) -> str:
    return _DIGITS[a]


def parse_element(ch: str) -> int:
    return _DIGITS.index(ch)


def parse_subspace(F: FieldSpec, text: str) -> Subspace:
    """Inverse of :meth:`Subspace.serialize` (also accepts one row per line)."""
    rows = [[parse_element(ch) for ch in tok] for tok in text.split()]
    return canonicalize(F, rows)


# --- batched routines -------------------------------------------------------


def rref_batch(F: FieldSpec, arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce every matrix of a ``(B, m, n)`` stack.

    Returns the reduced stack (zero rows moved to the bottom) and the rank of
    each matrix.
    """
    A = np.array(arr, dtype=np.uint8, copy=True)
    if A.ndim != 3:
        raise ValueError("expected a (B, m, n) array")
    nb, m, n = A.shape
    rank = np.zeros(nb, dtype=np.int64)
    if nb == 0 or m == 0:
        return A, rank
    prime = F.e == 1
    if prime:
        A = A.astype(np.int16)
    mul, sub, inv = F.mul_table, F.sub_table, F.inv_table
    row_ids = np.arange(m)
    for c in range(n):
        cand = (A[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        full = bool(has.all())
        sel = slice(None) if full else np.flatnonzero(has)
        r = rank[sel]
        p = cand[sel].argmax(axis=1)
        span = np.arange(len(r))
        block = A[sel]
        row_r = block[span, r]
        row_p = block[span, p]
        block[span, p] = row_r
        if prime:
            piv = (inv[row_p[:, c]][:, None].astype(np.int16) * row_p) % F.p
        else:
            piv = mul[inv[row_p[:, c]][:, None], row_p]
        block[span, r] = piv
        factors = block[:, :, c].copy()
        factors[span, r] = 0
        if prime:
            block = (block - factors[:, :, None] * piv[:, None, :]) % F.p
        else:
            block = sub[block, mul[factors[:, :, None], piv[:, None, :]]]
        if full:
            A = block
        else:
            A[sel] = block
        rank[sel] += 1
    return A.astype(np.uint8), rank


def matmul_batch(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Broadcasting matrix product over GF(q): ``(..., m, t) @ (..., t, n)``."""
    A = np.asarray(A, dtype=np.uint8)
    B = np.asarray(B, dtype=np.uint8)
    t = A.shape[-1]
    if B.shape[-2] != t:
        raise ValueError("inner dimensions differ")
    if F.e == 1:
        return (np.matmul(A.astype(np.int32), B.astype(np.int32)) % F.p).astype(np.uint8)
    out = None
    for s in range(t):
        term = F.mul_table[A[..., :, s, None], B[..., None, s, :]]
        out = term if out is None else F.add_table[out, term]
    return out


def pivot_columns(arr: np.ndarray) -> np.ndarray:
    """Pivot column of each row of a stack of full-rank RREF matrices."""
    return np.argmax(arr != 0, axis=-1)


def orthocomplement_batch(F: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Orthocomplements of a stack of full-rank RREF ``(B, k, n)`` bases, in RREF."""
    nb, k, n = arr.shape
    if k == n:
        raise ZeroSubspaceError("orthocomplement of the full space is zero")
    out = np.zeros((nb, n - k, n), dtype=np.uint8)
    piv = pivot_columns(arr)
    patterns, inverse = np.unique(piv, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    for g, pattern in enumerate(patterns):
        idx = np.flatnonzero(inverse == g)
        free = [c for c in range(n) if c not in set(pattern.tolist())]
        block = np.zeros((len(idx), n - k, n), dtype=np.uint8)
        for j, f in enumerate(free):
            block[:, j, f] = 1
            for i, p in enumerate(pattern):
                block[:, j, p] = F.neg_table[arr[idx, i, f]]
        out[idx] = block
    reduced, _ = rref_batch(F, out)
    return reduced
