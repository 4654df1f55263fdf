from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from conjtype.field import DEFAULT_MODULI, ExtField, FieldError, PrimeField, is_irreducible, is_prime

SMALL_PRIMES = [p for p in range(2, 24) if is_prime(p)]


def test_prime_check():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(FieldError):
        PrimeField(9)
    with pytest.raises(FieldError):
        PrimeField(1)


def test_prime_field_examples():
    assert PrimeField(3).inv(2) == 2
    assert PrimeField(5).add(3, 4) == 2
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)


def test_gf8_product_by_hand():
    # x^3 = x + 1 modulo x^3 + x + 1
    F = ExtField(2, 3, (1, 1, 0, 1))
    x = F.gen()
    x2 = F.mul(x, x)
    assert x2 == (0, 0, 1)
    assert F.mul(x, x2) == (1, 1, 0)


def test_is_square_examples():
    assert PrimeField(3).is_square(2) is False
    assert PrimeField(5).is_square(4) is True
    assert PrimeField(7).is_square(3) is False
    with pytest.raises(FieldError):
        PrimeField(2).is_square(1)


def test_smallest_nonsquare_examples():
    squares_mod_7 = {y * y % 7 for y in range(7)}
    assert squares_mod_7 == {0, 1, 2, 4}
    assert PrimeField(3).smallest_nonsquare() == 2
    assert PrimeField(5).smallest_nonsquare() == 2
    assert PrimeField(7).smallest_nonsquare() == min(set(range(1, 7)) - squares_mod_7)
    with pytest.raises(FieldError):
        PrimeField(2).smallest_nonsquare()


@pytest.mark.parametrize("p", SMALL_PRIMES[1:])
def test_euler_matches_exhaustive_squaring(p):
    F = PrimeField(p)
    squares = {y * y % p for y in range(p)}
    assert {x for x in range(p) if F.is_square(x)} == squares
    for x in squares:
        assert F.sqrt(x) ** 2 % p == x


@pytest.mark.parametrize("p,m", [(p, m) for (p, m) in DEFAULT_MODULI if p**m <= 343])
def test_every_nonzero_element_inverts(p, m):
    F = ExtField(p, m)
    elems = list(F.elements())
    assert len(elems) == len(set(elems)) == p**m
    for x in elems:
        if any(x):
            assert F.mul(x, F.inv(x)) == F.one


def test_default_moduli_irreducible_and_minimal():
    for (p, m), f in DEFAULT_MODULI.items():
        assert is_irreducible(f, p)
        assert p**m <= 3**6


def test_irreducibility_against_root_and_factor_search():
    # x^4 + x^2 + 1 = (x^2 + x + 1)^2 over GF(2): no roots yet reducible
    assert not is_irreducible((1, 0, 1, 0, 1), 2)
    assert is_irreducible((1, 1, 0, 0, 1), 2)
    assert not is_irreducible((0, 1, 1), 3)


def test_bad_modulus_rejected():
    with pytest.raises(FieldError):
        ExtField(2, 2, (1, 0, 1))  # (x + 1)^2
    with pytest.raises(FieldError):
        ExtField(2, 3, (1, 1, 1))  # wrong degree
    with pytest.raises(FieldError):
        ExtField(3, 11)  # beyond the supported size


def test_extension_without_table_entry_finds_modulus():
    F = ExtField(2, 10)
    assert is_irreducible(F.modulus, 2)
    x = F.gen()
    assert F.pow(x, 2**10 - 1) == F.one


@given(st.sampled_from(SMALL_PRIMES), st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(p, a, b, c):
    F = PrimeField(p)
    a, b, c = a % p, b % p, c % p
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3), st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_gf27_multiplication_commutes_and_distributes(x, y):
    F = ExtField(3, 3)
    x, y = tuple(x), tuple(y)
    z = F.gen()
    assert F.mul(x, y) == F.mul(y, x)
    assert F.mul(z, F.add(x, y)) == F.add(F.mul(z, x), F.mul(z, y))
