import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from goodslice.multipoly import (
    ArityError,
    BadPrime,
    SparsePoly,
    exact_divide,
    format_poly,
    initial_component,
    parse_poly,
    partial_derivative,
    poly_arith,
    substitute_affine,
    weighted_components,
)

from conftest import NV, points, polys

x1, x2, x3 = (SparsePoly.var(3, i) for i in range(3))
ONE = SparsePoly.constant(3, 1)


def brute_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(i + j for i, j in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return SparsePoly(a.nvars, out)


# -- worked examples ----------------------------------------------------------


def test_add_cancels():
    assert poly_arith(x1 + x2, x1 - x2, "add") == x1.scale(2)


def test_mul_adds_exponents():
    assert poly_arith(x1, x1 * x1, "mul") == x1**3


def test_difference_of_squares():
    assert (x1 + 1) * (x1 - 1) == x1**2 - 1


def test_arity_mismatch():
    with pytest.raises(ArityError):
        x1 + SparsePoly.var(2, 0)
    with pytest.raises(ArityError):
        SparsePoly(2, {(1, 2, 3): 1})


def test_substitute_binomial():
    t = SparsePoly.var(1, 0)
    assert substitute_affine(t**2, [t + 1]) == t**2 + t.scale(2) + 1


def test_weighted_components_examples():
    t1, t2 = SparsePoly.var(2, 0), SparsePoly.var(2, 1)
    assert weighted_components(t1 + t1 * t2, (1, 1)) == [(1, t1), (2, t1 * t2)]
    assert weighted_components(t1 + t2, (4, 6)) == [(4, t1), (6, t2)]
    assert weighted_components(SparsePoly.zero(2), (1, 1)) == []


def test_derivative_examples():
    assert partial_derivative(x1**3, 0) == (x1**2).scale(3)
    assert partial_derivative(x1, 1).is_zero()


def test_evaluate_examples():
    assert (x1 * x2).evaluate([2, 3, 0]) == 6
    p = x1 * x2 + x3.scale(Fraction(1, 3)) + 7
    assert p.evaluate([0, 0, 0]) == 7


def test_bad_prime():
    p = x1.scale(Fraction(1, 7))
    with pytest.raises(BadPrime):
        p.evaluate([1, 1, 1], prime=7)


def test_canonical_text():
    p = x1**2 * x3 - x2.scale(Fraction(1, 2)) + 3
    assert format_poly(p) == "1/1*t1^2*t3 + -1/2*t2 + 3/1"
    assert format_poly(SparsePoly.zero(3)) == "0"
    assert parse_poly(format_poly(p), "t", 3) == p


def test_exact_divide():
    a, b = x1 + x2, x1 - x3.scale(2)
    assert exact_divide(a * b, b) == a
    with pytest.raises(ArithmeticError):
        exact_divide(a * b + 1, b)


# -- randomized oracles -------------------------------------------------------


@given(polys(max_terms=5), polys(max_terms=5))
def test_mul_matches_brute_force(a, b):
    assert a * b == brute_mul(a, b)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a - a).is_zero()


@given(polys(), st.lists(st.integers(1, 5), min_size=NV, max_size=NV))
def test_components_reconstruct(p, w):
    comps = weighted_components(p, w)
    total = SparsePoly.zero(NV)
    for d, c in comps:
        assert c.is_homogeneous(w, d)
        total = total + c
    assert total == p
    assert [d for d, _ in comps] == sorted({d for d, _ in comps})


@given(polys())
def test_initial_component_brute_force(p):
    if p.is_zero():
        return
    lowest = min(sum(e) for e, _ in p.items())
    brute = SparsePoly(NV, {e: c for e, c in p.items() if sum(e) == lowest})
    assert initial_component(p) == (lowest, brute)


@given(polys(), polys(), st.lists(st.integers(1, 4), min_size=NV, max_size=NV))
def test_initial_of_product(p, q, w):
    if p.is_zero() or q.is_zero():
        return
    dp, _ = initial_component(p, w)
    dq, _ = initial_component(q, w)
    assert initial_component(p * q, w)[0] == dp + dq


@given(polys(), polys(), st.integers(0, NV - 1))
def test_leibniz(p, q, i):
    assert (p * q).derivative(i) == p * q.derivative(i) + q * p.derivative(i)


@given(polys(), st.lists(polys(max_terms=3), min_size=NV, max_size=NV), points)
def test_substitution_homomorphism(p, images, pt):
    assert substitute_affine(p, images).evaluate(pt) == p.evaluate([im.evaluate(pt) for im in images])


@given(polys())
def test_identity_substitution(p):
    assert substitute_affine(p, [x1, x2, x3]) == p


@given(polys(), points, st.sampled_from([2147483647, 2147483629, 1000003]))
def test_modular_evaluation_compatible(p, pt, prime):
    dens = [p.denominator()] + [Fraction(x).denominator for x in pt]
    if any(d % prime == 0 for d in dens):
        return
    value = Fraction(p.evaluate(pt))
    expected = value.numerator * pow(value.denominator, -1, prime) % prime
    assert p.evaluate(pt, prime=prime) == expected


@given(polys())
def test_text_round_trip(p):
    assert parse_poly(format_poly(p), "t", NV) == p


def test_items_are_graded_lex():
    rng = random.Random(3)
    p = SparsePoly(3, {tuple(rng.randint(0, 3) for _ in range(3)): 1 for _ in range(20)})
    keys = [e for e, _ in p.items()]
    assert keys == sorted(keys, key=lambda e: (sum(e), e), reverse=True)


def test_unpack_many_matches_unpack():
    from goodslice.multipoly import pack, unpack, unpack_many

    rng = random.Random(0)
    for n in (1, 4, 36):
        keys = [pack([rng.randint(0, 1023) for _ in range(n)]) for _ in range(30)]
        assert unpack_many(keys, n).tolist() == [list(unpack(k, n)) for k in keys]
