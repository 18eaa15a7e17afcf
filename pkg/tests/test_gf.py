import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import fermat_inverse
from qpam_pnc.gf import (
    ConfigurationError,
    PrimeField,
    bezout,
    check_modulus,
    gf_add,
    gf_inv,
    gf_mul,
    gf_neg,
    gf_sub,
)

SMALL_PRIMES = [3, 5, 7, 11, 13]


@pytest.mark.parametrize("a,b,q,expected", [(6, 1, 7, 0), (0, 5, 7, 5), (3, 4, 5, 2)])
def test_add(a, b, q, expected):
    assert gf_add(a, b, q) == expected


def test_mul_sub_neg():
    assert gf_mul(4, 5, 7) == 6
    assert gf_neg(3, 7) == 4
    assert gf_sub(2, 4, 5) == 3


@pytest.mark.parametrize("a,q,expected", [(4, 7, 2), (1, 5, 1), (10, 11, 10)])
def test_inverse_examples(a, q, expected):
    assert gf_inv(a, q) == expected


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        gf_inv(0, 7)


@pytest.mark.parametrize("q", [q for q in range(3, 102) if all(q % p for p in range(2, q))])
def test_inverse_exhaustive(q):
    for a in range(1, q):
        inv = gf_inv(a, q)
        assert a * inv % q == 1
        assert inv == fermat_inverse(a, q)


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_field_axioms_exhaustive(q):
    els = range(q)
    for a, b in itertools.product(els, els):
        assert gf_add(a, b, q) == gf_add(b, a, q)
        assert gf_mul(a, b, q) == gf_mul(b, a, q)
    for a, b, c in itertools.product(els, els, els):
        assert gf_add(gf_add(a, b, q), c, q) == gf_add(a, gf_add(b, c, q), q)
        assert gf_mul(gf_mul(a, b, q), c, q) == gf_mul(a, gf_mul(b, c, q), q)
        assert gf_mul(a, gf_add(b, c, q), q) == gf_add(gf_mul(a, b, q), gf_mul(a, c, q), q)


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -7, 15])
def test_modulus_must_be_odd_prime(bad):
    with pytest.raises(ConfigurationError):
        check_modulus(bad)


def test_element_out_of_range():
    with pytest.raises(ConfigurationError):
        gf_add(7, 1, 7)


@pytest.mark.parametrize("a,b,x,y", [(7, 6, 1, -1), (1, 9, 1, 0), (11, 9, 5, -6)])
def test_bezout_examples(a, b, x, y):
    r = bezout(a, b)
    assert (r.g, r.x, r.y) == (1, x, y)


def test_bezout_zero_zero():
    with pytest.raises(ValueError):
        bezout(0, 0)


def test_bezout_exhaustive_small():
    for a in range(1, 201):
        for b in range(1, 201):
            g, x, y = bezout(a, b)
            assert a % g == 0 and b % g == 0
            assert a * x + b * y == g
            assert 0 < x <= b // g


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_bezout_any_sign(a, b):
    if a == 0 and b == 0:
        return
    g, x, y = bezout(a, b)
    assert g > 0 and a * x + b * y == g
    assert a % g == 0 and b % g == 0


@given(st.integers(2, 10**5), st.integers(2, 10**5))
def test_bezout_bounded_solution_for_positive_inputs(a, b):
    g, x, y = bezout(a, b)
    if g < min(a, b):
        assert 0 < x < b // g
        assert -(a // g) < y < 0


def test_prime_field_wrapper():
    f = PrimeField(7)
    assert f.mul(f.inv(3), 3) == 1
    assert list(f.nonzero()) == [1, 2, 3, 4, 5, 6]
    with pytest.raises(ConfigurationError):
        PrimeField(9)
