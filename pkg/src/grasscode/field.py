"""Arithmetic in GF(q) for the small prime powers used by the library.

Elements are represented by integer indices in ``[0, q)``.  The index is the
base-``p`` digit vector of the polynomial coefficients, lowest degree first,
so index ``0`` is zero and index ``1`` is one.  All arithmetic goes through
tables built once per field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "SUPPORTED_ORDERS",
    "FieldSpec",
    "FieldElem",
    "FieldMismatchError",
    "gf",
    "add",
    "mul",
    "inv",
    "field_automorphisms",
]

# (p, e, modulus low-degree first)
_MODULI = {
    2: (2, 1, (0, 1)),
    3: (3, 1, (0, 1)),
    4: (2, 2, (1, 1, 1)),  # x^2 + x + 1
    5: (5, 1, (0, 1)),
    7: (7, 1, (0, 1)),
    8: (2, 3, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, 2, (1, 0, 1)),  # x^2 + 1
    11: (11, 1, (0, 1)),
    13: (13, 1, (0, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),  # x^4 + x + 1
    25: (5, 2, (1, 1, 1)),  # x^2 + x + 1
    27: (3, 3, (1, 2, 0, 1)),  # x^3 + 2x + 1
}

SUPPORTED_ORDERS = tuple(sorted(_MODULI))


class FieldMismatchError(ValueError):
    """Raised when elements of different fields are combined."""


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = [c % p for c in a]
    e = len(m) - 1
    lead_inv = pow(m[-1], -1, p)
    for deg in range(len(a) - 1, e - 1, -1):
        c = a[deg] * lead_inv % p
        if c:
            for j in range(e + 1):
                a[deg - e + j] = (a[deg - e + j] - c * m[j]) % p
    return (a + [0] * e)[:e]


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    e = len(m) - 1
    if e <= 1:
        return True
    # trial division by every monic polynomial of degree 1..e//2
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(m), divisor, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Construction data and lookup tables for GF(p^e)."""

    p: int
    e: int
    modulus: tuple[int, ...]
    add_table: np.ndarray = field(repr=False, compare=False, hash=False)
    mul_table: np.ndarray = field(repr=False, compare=False, hash=False)
    neg_table: np.ndarray = field(repr=False, compare=False, hash=False)
    sub_table: np.ndarray = field(repr=False, compare=False, hash=False)
    inv_table: np.ndarray = field(repr=False, compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def build(cls, p: int, e: int = 1, modulus: tuple[int, ...] | None = None) -> "FieldSpec":
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if e == 1:
            modulus = (0, 1)
        if modulus is None or len(modulus) != e + 1 or modulus[-1] % p != 1:
            raise ValueError("modulus must be a monic polynomial of degree e")
        modulus = tuple(int(c) % p for c in modulus)
        if e > 1 and not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        q = p**e
        digits = [[(a // p**i) % p for i in range(e)] for a in range(q)]

        def index(coeffs):
            return sum(c * p**i for i, c in enumerate(coeffs))

        add_t = np.zeros((q, q), dtype=np.uint8)
        mul_t = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            for b in range(q):
                add_t[a, b] = index([(x + y) % p for x, y in zip(digits[a], digits[b])])
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
                mul_t[a, b] = index(_poly_mod(prod, modulus, p))
        neg_t = np.array([int(np.flatnonzero(add_t[a] == 0)[0]) for a in range(q)], dtype=np.uint8)
        sub_t = add_t[:, neg_t]
        inv_t = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            hits = np.flatnonzero(mul_t[a] == 1)
            if len(hits) != 1:
                raise ValueError(f"modulus {modulus} does not define a field")
            inv_t[a] = hits[0]
        for t in (add_t, mul_t, neg_t, sub_t, inv_t):
            t.setflags(write=False)
        return cls(p, e, modulus, add_t, mul_t, neg_t, sub_t, inv_t)

    # plain-list copies for scalar loops, where numpy indexing overhead dominates
    @property
    def lists(self) -> "_ListTables":
        return _list_tables(self)

    def elem(self, index: int) -> "FieldElem":
        return FieldElem(self, index)

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, a) for a in range(self.q)]

    def frobenius(self, power: int) -> np.ndarray:
        """Lookup array of ``x -> x^(p^power)``."""
        return _frobenius(self, power % self.e)

    def __str__(self) -> str:
        return f"GF({self.q})"


@dataclass(frozen=True)
class _ListTables:
    add: list
    mul: list
    sub: list
    neg: list
    inv: list


@lru_cache(maxsize=None)
def _list_tables(F: FieldSpec) -> _ListTables:
    return _ListTables(
        F.add_table.tolist(),
        F.mul_table.tolist(),
        F.sub_table.tolist(),
        F.neg_table.tolist(),
        F.inv_table.tolist(),
    )


@lru_cache(maxsize=None)
def _frobenius(F: FieldSpec, power: int) -> np.ndarray:
    out = np.arange(F.q, dtype=np.uint8)
    for _ in range(power):
        out = np.array([_pow(F, int(a), F.p) for a in out], dtype=np.uint8)
    out.setflags(write=False)
    return out


def _pow(F: FieldSpec, a: int, n: int) -> int:
    r = 1
    for _ in range(n):
        r = int(F.mul_table[r, a])
    return r


@lru_cache(maxsize=None)
def gf(q: int) -> FieldSpec:
    """The field of order ``q`` with the fixed modulus from the support table."""
    try:
        p, e, modulus = _MODULI[q]
    except KeyError:
        raise ValueError(f"unsupported field order {q}; supported: {SUPPORTED_ORDERS}") from None
    return FieldSpec.build(p, e, modulus)


@dataclass(frozen=True)
class FieldElem:
    spec: FieldSpec
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.spec.q:
            raise ValueError(f"index {self.index} out of range for {self.spec}")

    def _check(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem):
            raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldMismatchError(f"{self.spec} element combined with {other.spec} element")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.spec, int(self.spec.add_table[self.index, other.index]))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.spec, int(self.spec.sub_table[self.index, other.index]))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.spec, int(self.spec.mul_table[self.index, other.index]))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.spec, int(self.spec.neg_table[self.index]))

    def inverse(self) -> "FieldElem":
        if self.index == 0:
            raise ZeroDivisionError("no inverse: zero element")
        return FieldElem(self.spec, int(self.spec.inv_table[self.index]))

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return self * other.inverse()

    def __int__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return f"{self.spec}({self.index})"


def add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def inv(a: FieldElem) -> FieldElem:
    return a.inverse()


@dataclass(frozen=True)
class FieldAutomorphism:
    """The Frobenius power ``x -> x^(p^power)``."""

    spec: FieldSpec
    power: int

    @property
    def table(self) -> np.ndarray:
        return self.spec.frobenius(self.power)

    @property
    def is_identity(self) -> bool:
        return self.power % self.spec.e == 0

    def __call__(self, a: FieldElem) -> FieldElem:
        if a.spec != self.spec:
            raise FieldMismatchError(f"{self.spec} automorphism applied to {a.spec} element")
        return FieldElem(self.spec, int(self.table[a.index]))

    def compose(self, inner: "FieldAutomorphism") -> "FieldAutomorphism":
        """``self o inner``."""
        return FieldAutomorphism(self.spec, (self.power + inner.power) % self.spec.e)


def field_automorphisms(spec: FieldSpec) -> list[FieldAutomorphism]:
    return [FieldAutomorphism(spec, i) for i in range(spec.e)]
