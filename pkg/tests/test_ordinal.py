import pytest
from hypothesis import given, settings, strategies as st

from ordino.ordinal import (AT_LEAST_EPSILON0, AddOmegaPow, AddOne,
                            AtLeastEpsilon0, DegenerateSeed, EQUAL, GREATER,
                            LESS, MulOmega, OMEGA, OmegaPow, ONE, Ordinal,
                            OrdinalParseError, PowOmega, ZERO, add,
                            cmp_overflow, compare, from_int, iterate_sup,
                            mul, omega_pow, omega_term, parse_ord, print_ord,
                            succ, sup_plus_one)

from oracle_polynomials import add_poly, compare_poly, from_triple, mul_poly

W = OMEGA
W2 = omega_term(from_int(2))
W3 = omega_term(from_int(3))


def o(text):
    return parse_ord(text)


# --- construction and comparison -----------------------------------------------


def test_compare_identity():
    assert compare(ZERO, ZERO) == EQUAL


def test_compare_omega_cases():
    assert compare(add(W, ONE), mul(W, from_int(2))) == LESS
    # frozen from the polynomial oracle: w^2 > w*3
    assert compare_poly(from_triple(1, 0, 0), from_triple(0, 3, 0)) == 1
    assert compare(W2, mul(W, from_int(3))) == GREATER


def test_invalid_construction():
    with pytest.raises(ValueError):
        Ordinal(((ZERO, 0),))
    with pytest.raises(ValueError):
        Ordinal(((ZERO, 1), (ONE, 1)))  # increasing exponents


def test_marker_comparisons():
    assert cmp_overflow(AT_LEAST_EPSILON0, W2) == GREATER
    assert cmp_overflow(W2, AT_LEAST_EPSILON0) == LESS
    assert cmp_overflow(AT_LEAST_EPSILON0, AT_LEAST_EPSILON0) == EQUAL


# --- arithmetic -----------------------------------------------------------------


def test_add_absorption():
    assert add(ONE, W) == W
    assert add(W, W) == o("w*2")
    assert add(o("w + 3"), o("w^2")) == o("w^2")


def test_mul_examples():
    assert mul(W, W) == o("w^2")
    assert mul(o("w + 1"), W) == o("w^2")
    assert mul(o("w + 1"), from_int(2)) == o("w*2 + 1")
    assert mul(ZERO, W) == ZERO
    assert mul(W, ZERO) == ZERO


def test_succ_and_sup():
    assert succ(ZERO) == ONE
    assert sup_plus_one([]) == ZERO
    assert sup_plus_one([ZERO]) == ONE
    assert sup_plus_one([W, from_int(3), W]) == o("w + 1")


def test_omega_pow_and_overflow():
    assert omega_pow(ZERO) == ONE
    assert omega_pow(ONE) == W
    assert omega_pow(W) == o("w^(w)")
    deep = ZERO
    for _ in range(70):
        result = omega_pow(deep)
        if isinstance(result, AtLeastEpsilon0):
            break
        deep = result
    else:
        pytest.fail("deep towers should hit the overflow marker")


# --- iterate_sup ----------------------------------------------------------------


def test_iterate_sup_closed_forms():
    assert iterate_sup(AddOne(), ZERO) == W
    assert iterate_sup(AddOmegaPow(ONE), ZERO) == o("w^2")
    assert iterate_sup(AddOmegaPow(ZERO), W) == o("w*2")
    assert iterate_sup(OmegaPow(), ONE) == AT_LEAST_EPSILON0
    assert iterate_sup(MulOmega(), ONE) == o("w^(w)")
    assert iterate_sup(PowOmega(), o("w^(w)")) == o("w^(w^(w))")


def test_iterate_sup_degenerate_seeds():
    with pytest.raises(DegenerateSeed):
        iterate_sup(MulOmega(), ZERO)
    with pytest.raises(DegenerateSeed):
        iterate_sup(PowOmega(), ONE)


# --- parsing and printing -------------------------------------------------------


def test_parse_examples():
    assert o("w^2 + w*3 + 5").terms == ((from_int(2), 1), (ONE, 3), (ZERO, 5))
    assert print_ord(ZERO) == "0"
    assert print_ord(o("w^(w + 2)*4 + w^3 + 9")) == "w^(w + 2)*4 + w^3 + 9"


def test_parse_rejections():
    for bad in ["w + w", "w + w^2", "3 + 5", "w*0", "0 + w", "w^", "", "x"]:
        with pytest.raises(OrdinalParseError):
            parse_ord(bad)


def test_parse_error_position():
    with pytest.raises(OrdinalParseError) as err:
        parse_ord("w + w")
    assert err.value.pos > 0


# --- oracle equivalence below w^3 ------------------------------------------------


def _triple_to_ordinal(a, b, c):
    value = ZERO
    if a:
        value = add(value, omega_term(from_int(2), a))
    if b:
        value = add(value, omega_term(ONE, b))
    if c:
        value = add(value, from_int(c))
    return value


def _ordinal_to_poly(x):
    poly = {}
    for exp, coeff in x.terms:
        assert exp.is_finite()
        poly[exp.as_int()] = coeff
    return poly


TRIPLES = [(a, b, c) for a in range(6) for b in range(6) for c in range(6)]


def test_triple_oracle_exhaustive():
    values = {t: _triple_to_ordinal(*t) for t in TRIPLES}
    polys = {t: from_triple(*t) for t in TRIPLES}
    for t1 in TRIPLES:
        for t2 in TRIPLES:
            x, y = values[t1], values[t2]
            p, q = polys[t1], polys[t2]
            assert compare(x, y) == compare_poly(p, q)
            assert _ordinal_to_poly(add(x, y)) == add_poly(p, q)
            assert _ordinal_to_poly(mul(x, y)) == mul_poly(p, q)


# --- property tests --------------------------------------------------------------


def ordinals(max_depth=3):
    def build(depth):
        if depth == 0:
            return st.integers(0, 9).map(from_int)
        exponent = build(depth - 1)
        term = st.tuples(exponent, st.integers(1, 4))
        return st.lists(term, max_size=3).map(
            lambda ts: _sum_terms(ts))
    return build(max_depth)


def _sum_terms(terms):
    value = ZERO
    for exp, coeff in terms:
        value = add(value, omega_term(exp, coeff))
    return value


@settings(max_examples=300)
@given(ordinals(), ordinals(), ordinals())
def test_compare_trichotomy_transitivity(a, b, c):
    results = {compare(a, b), compare(b, a)}
    if compare(a, b) == EQUAL:
        assert a == b
    else:
        assert results == {LESS, GREATER}
    if compare(a, b) != GREATER and compare(b, c) != GREATER:
        assert compare(a, c) != GREATER


@settings(max_examples=300)
@given(ordinals())
def test_parse_print_roundtrip(a):
    assert parse_ord(print_ord(a)) == a


@settings(max_examples=300)
@given(ordinals(), ordinals(), ordinals())
def test_add_associative(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))


@settings(max_examples=200)
@given(ordinals())
def test_add_identity(a):
    assert add(a, ZERO) == a
    assert add(ZERO, a) == a


@settings(max_examples=300)
@given(ordinals(), ordinals(), ordinals())
def test_add_right_monotone(a, b, c):
    assert compare(add(a, b), add(a, c)) == compare(b, c)


@settings(max_examples=300)
@given(ordinals(), ordinals(), ordinals())
def test_mul_right_distributive(a, b, c):
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@settings(max_examples=200)
@given(ordinals(max_depth=2), ordinals(max_depth=2))
def test_omega_pow_homomorphism(a, b):
    pa, pb, pab = omega_pow(a), omega_pow(b), omega_pow(add(a, b))
    if not any(isinstance(v, AtLeastEpsilon0) for v in (pa, pb, pab)):
        assert pab == mul(pa, pb)
