import numpy as np
import pytest

from grasscode.field import (
    SUPPORTED_ORDERS,
    FieldMismatchError,
    FieldSpec,
    add,
    field_automorphisms,
    gf,
    inv,
    mul,
)


def E(q, i):
    return gf(q).elem(i)


def test_addition_examples():
    assert add(E(2, 1), E(2, 1)) == E(2, 0)
    assert add(E(3, 2), E(3, 2)) == E(3, 1)
    # digit vectors (0,1) + (1,1) = (1,0)
    assert add(E(4, 2), E(4, 3)) == E(4, 1)


def test_multiplication_examples():
    assert mul(E(2, 1), E(2, 1)) == E(2, 1)
    assert mul(E(5, 3), E(5, 4)) == E(5, 2)
    # x * x = x + 1 modulo x^2 + x + 1
    assert mul(E(4, 2), E(4, 2)) == E(4, 3)


def test_inverse_examples():
    assert inv(E(2, 1)) == E(2, 1)
    assert inv(E(3, 2)) == E(3, 2)
    assert inv(E(4, 2)) == E(4, 3)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError, match="no inverse"):
        inv(E(7, 0))


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        add(E(2, 1), E(3, 1))
    with pytest.raises(FieldMismatchError):
        mul(E(4, 1), E(8, 1))


def test_operators_match_functions():
    a, b = E(9, 5), E(9, 7)
    assert a + b == add(a, b)
    assert a * b == mul(a, b)
    assert (a - b) + b == a
    assert (a / b) * b == a
    assert -a + a == E(9, 0)


def test_unsupported_order():
    with pytest.raises(ValueError):
        gf(6)
    with pytest.raises(ValueError):
        gf(32)


def test_reducible_modulus_rejected():
    # x^2 + 1 = (x + 1)^2 over GF(2)
    with pytest.raises(ValueError):
        FieldSpec.build(2, 2, (1, 0, 1))


@pytest.mark.parametrize("q", [q for q in SUPPORTED_ORDERS if q <= 25])
def test_field_axioms_exhaustive(q):
    F = gf(q)
    A, M = F.add_table.astype(np.int64), F.mul_table.astype(np.int64)
    x = np.arange(q)
    assert (A == A.T).all() and (M == M.T).all()
    # (a+b)+c == a+(b+c), (ab)c == a(bc), a(b+c) == ab+ac over all triples
    assert (A[A[:, :, None], x[None, None, :]] == A[x[:, None, None], A[None, :, :]]).all()
    assert (M[M[:, :, None], x[None, None, :]] == M[x[:, None, None], M[None, :, :]]).all()
    assert (M[x[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]).all()
    assert (A[0] == x).all() and (M[1] == x).all() and (M[0] == 0).all()
    assert (A[x, F.neg_table] == 0).all()
    nz = x[1:]
    assert (M[nz, F.inv_table[nz]] == 1).all()
    # no zero divisors
    assert (M[1:, 1:] != 0).all()


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_frobenius_bijective_and_multiplicative(q):
    F = gf(q)
    for aut in field_automorphisms(F):
        t = aut.table
        assert sorted(t.tolist()) == list(range(q))
        assert (t[F.mul_table] == F.mul_table[t[:, None], t[None, :]]).all()
        assert (t[F.add_table] == F.add_table[t[:, None], t[None, :]]).all()
        assert t[0] == 0 and t[1] == 1


def test_automorphism_counts():
    assert [a.is_identity for a in field_automorphisms(gf(2))] == [True]
    assert [a.is_identity for a in field_automorphisms(gf(3))] == [True]
    auts = field_automorphisms(gf(4))
    assert [a.is_identity for a in auts] == [True, False]
    # x -> x^2 swaps the two generators of GF(4)
    assert auts[1](E(4, 2)) == E(4, 3)
    assert len(field_automorphisms(gf(27))) == 3


def test_frobenius_composition_cycles():
    F = gf(16)
    sigma = field_automorphisms(F)[1]
    acc = sigma
    for _ in range(3):
        acc = acc.compose(sigma)
    assert acc.is_identity
