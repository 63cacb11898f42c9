from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from areamoments.exactmath import (
    BiPoly,
    factorial,
    falling_factorial_poly,
    format_elementary_symmetric,
    inv_factorial,
    multinomial,
    poly_diffop,
    to_elementary_symmetric,
)

x, y = BiPoly.var(1), BiPoly.var(2)

coeffs = st.fractions(min_value=-50, max_value=50, max_denominator=12)
sparse_polys = st.dictionaries(
    st.tuples(st.integers(0, 5), st.integers(0, 5)), coeffs, max_size=6
).map(BiPoly)


def _product(values):
    out = 1
    for v in values:
        out *= v
    return out


def test_factorial_examples():
    assert factorial(0) == 1
    assert factorial(4) == 24
    assert factorial(20) == _product(range(1, 21))
    assert factorial(20) == 2432902008176640000


def test_factorial_recursion_up_to_200():
    for n in range(1, 201):
        assert factorial(n) == n * factorial(n - 1)


def test_factorial_large_exact():
    assert factorial(10_000) == math.factorial(10_000)


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        factorial(-1)


def test_inv_factorial_negative_is_zero():
    assert inv_factorial(-3) == 0
    assert inv_factorial(3) == Fraction(1, 6)


@pytest.mark.parametrize("parts, expected", [([1, 1], 2), ([2, 2], 6), ([1, 1, 2], 12), ([], 1), ([0, 3], 1)])
def test_multinomial_examples(parts, expected):
    assert multinomial(parts) == expected


@given(st.lists(st.integers(0, 6), max_size=5), st.randoms())
def test_multinomial_permutation_invariant(parts, rnd):
    shuffled = parts[:]
    rnd.shuffle(shuffled)
    assert multinomial(parts) == multinomial(shuffled)
    assert multinomial(parts) == factorial(sum(parts)) // _product(factorial(p) for p in parts)


def test_rational_canonical_form():
    assert Fraction(2, 4) == Fraction(1, 2)
    p = BiPoly({(1, 0): Fraction(2, 4)})
    assert p.coeff(1, 0).denominator == 2
    assert p == BiPoly({(1, 0): Fraction(1, 2)})


def test_no_stored_zeros():
    p = x + y - x
    assert p == y
    assert (1, 0) not in p.terms()
    assert BiPoly({(2, 2): 0}).is_zero()
    assert BiPoly().degree() == -1


def test_diffop_examples():
    assert poly_diffop(BiPoly.constant(1)).is_zero()
    assert poly_diffop(x) == x
    assert poly_diffop(x * y).is_zero()
    assert poly_diffop(x**3 * y) == x**3 * y * 2


@settings(max_examples=60)
@given(sparse_polys, sparse_polys)
def test_diffop_leibniz(p, q):
    assert poly_diffop(p * q) == poly_diffop(p) * q + p * poly_diffop(q)


@given(sparse_polys, sparse_polys, sparse_polys)
def test_ring_laws(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == BiPoly()


def test_falling_factorial_examples():
    assert falling_factorial_poly(1, 0) == BiPoly.constant(1)
    assert falling_factorial_poly(1, 2) == x**2 - x
    assert falling_factorial_poly(2, 3) == y**3 - y**2 * 3 + y * 2


@pytest.mark.parametrize("depth", range(7))
def test_falling_factorial_values(depth):
    p = falling_factorial_poly(1, depth)
    for n in range(10):
        expected = _product(n - i for i in range(depth))
        assert p.evaluate(n, 0) == expected


def test_evaluate_and_restrict():
    p = x**2 * y + y * Fraction(1, 3)
    assert p.evaluate(2, 3) == 12 + 1
    assert p.restrict(2, 0).is_zero()
    assert p.restrict(1, 0) == y * Fraction(1, 3)
    assert p.degree() == 3
    assert p.degree_in(1) == 2 and p.degree_in(2) == 1


@given(sparse_polys)
def test_json_round_trip(p):
    assert BiPoly.from_json(p.to_json()) == p


def test_json_layout_sorted():
    p = y * Fraction(-1, 2) + x**2 + 3
    assert p.to_json_obj() == {"terms": [[0, 0, "3/1"], [0, 1, "-1/2"], [2, 0, "1/1"]]}


def test_swap_and_symmetry():
    p = x**2 * y + x
    assert p.swap() == y**2 * x + y
    assert not p.is_symmetric()
    assert (p + p.swap()).is_symmetric()


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), coeffs, max_size=5))
def test_elementary_symmetric_round_trip(terms):
    e2, e1 = x * y, x + y
    p = BiPoly()
    for (i, j), c in terms.items():
        p = p + e2**i * e1**j * c
    basis = to_elementary_symmetric(p)
    rebuilt = BiPoly()
    for (i, j), c in basis.items():
        rebuilt = rebuilt + e2**i * e1**j * c
    assert rebuilt == p


def test_elementary_symmetric_rejects_asymmetric():
    with pytest.raises(ValueError):
        to_elementary_symmetric(x)


def test_elementary_symmetric_display():
    p4 = (x * y) * ((x * y) * 7 - (x + y)) / 15
    assert to_elementary_symmetric(p4) == {(2, 0): Fraction(7, 15), (1, 1): Fraction(-1, 15)}
    assert format_elementary_symmetric(p4) == "7*(n1*n2)^2/15 - (n1*n2)*(n1+n2)/15"


def test_monomial_display():
    assert (x * y / 3).format(("n1", "n2")) == "n1*n2/3"
    assert (x * y / 3).format() == "x*y/3"
