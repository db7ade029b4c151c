import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carlitz.field import field, FieldSpec
from carlitz.errors import DivisionByZero, ParseError


SPECS = [field(2), field(3), field(5), field(2, 2), field(3, 2)]


@pytest.mark.parametrize("f", SPECS, ids=lambda f: f"q{f.q}")
def test_table_shapes(f):
    q = f.q
    assert f.add_table.shape == (q, q)
    assert f.mul_table.shape == (q, q)
    assert f.neg_table.shape == (q,)
    assert f.inv_table.shape == (q,)


@pytest.mark.parametrize("f", SPECS, ids=lambda f: f"q{f.q}")
def test_field_axioms_exhaustive(f):
    q = f.q
    for a in range(q):
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in range(q):
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in range(q):
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b),
                                                      f.mul(a, c))


@pytest.mark.parametrize("f", SPECS, ids=lambda f: f"q{f.q}")
def test_fermat_and_frobenius(f):
    # x^q = x for every element; frobenius is therefore the identity
    for a in range(f.q):
        assert f.pow(a, f.q) == a
        assert f.frobenius(a) == a
    # x -> x^p generates Gal(F_q / F_p): applying it e times is identity
    for a in range(f.q):
        b = a
        for _ in range(f.e):
            b = f.pow(b, f.p)
        assert b == a


def test_inverse_of_zero_raises():
    f = field(3)
    with pytest.raises(DivisionByZero):
        f.inv(0)


def test_characteristic_sums():
    for f in SPECS:
        one = 1
        acc = 0
        for _ in range(f.p):
            acc = f.add(acc, one)
        assert acc == 0


def test_tables_fancy_indexable():
    f = field(3)
    a = np.array([0, 1, 2, 2], dtype=np.int16)
    b = np.array([1, 1, 2, 0], dtype=np.int16)
    got = f.add_table[a, b]
    assert list(got) == [f.add(int(x), int(y)) for x, y in zip(a, b)]


def test_bad_specs_rejected():
    with pytest.raises(ParseError):
        FieldSpec(4, 1)  # not prime
    with pytest.raises(ParseError):
        FieldSpec(2, 2, modulus=[1, 1])  # wrong degree
    with pytest.raises(ParseError):
        FieldSpec(2, 2, modulus=[0, 0, 1])  # t^2, reducible


def test_shared_instance_cache():
    assert field(3) is field(3)
    assert field(2, 2) is field(2, 2)


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 8), st.integers(0, 8))
def test_f9_subfield_embedding(i, j):
    # elements of F_3 inside F_9 add and multiply like F_3
    f9 = field(3, 2)
    f3 = field(3)
    a, b = i % 3, j % 3
    assert f9.add(a, b) == f3.add(a, b)
    assert f9.mul(a, b) == f3.mul(a, b)
