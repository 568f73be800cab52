"""Polynomial layer: arithmetic, parsing, formatting, GF(2) residues."""

import random

import pytest

from cmwitness.poly import (
    BaseRing,
    NotDivisibleError,
    Poly,
    PolyParseError,
    UnknownVariableError,
    divide_exact,
    f2_divide_exact,
    f2_is_divisible,
    f2_one,
    f2_zero,
    format_poly,
    half,
    is_divisible,
    is_even,
    lift_f2,
    parse_poly,
    partial_derivative,
    reduce_mod2,
    sqrt_f2,
    substitute_ints,
)

RING = BaseRing(("X", "Y", "V"))
X, Y, V = RING.gens()


def rand_poly(rng, ring, max_terms=5, max_deg=3, max_coeff=9):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        e = tuple(rng.randrange(max_deg + 1) for _ in ring.variables)
        c = rng.randrange(-max_coeff, max_coeff + 1)
        terms[e] = terms.get(e, 0) + c
    return Poly(ring, {e: c for e, c in terms.items() if c})


def test_ring_constructors():
    assert RING.nvars == 3
    assert str(RING.one()) == "1"
    assert str(RING.const(-5)) == "-5"
    assert RING.zero().is_zero()
    assert RING.var("Y") == Y
    with pytest.raises(ValueError):
        RING.var("Z")
    with pytest.raises(ValueError):
        BaseRing(("X", "X"))


def test_arithmetic_identities():
    p = X * X * Y - Y.scale(3) + RING.const(7)
    q = V * V + X.scale(2)
    assert p + q - q == p
    assert p * RING.one() == p
    assert p * RING.zero() == RING.zero()
    assert (p + q) * (p - q) == p * p - q * q
    assert (X + Y) ** 2 == X * X + (X * Y).scale(2) + Y * Y
    assert p.scale(4) == p + p + p + p
    assert -(-p) == p
    assert 2 - RING.const(1) == RING.one()


def test_int_coercion():
    assert X + 1 == X + RING.one()
    assert 3 * X == X.scale(3)
    assert (X - 1) * (X + 1) == X * X - 1


def test_degree_and_lead():
    p = X * X * Y - V.scale(5)
    assert p.total_degree() == 3
    assert p.lead() == ((2, 1, 0), 1)
    assert RING.const(4).total_degree() == 0
    assert p.num_terms() == 2
    assert (X.scale(6) + Y.scale(9)).integer_content() == 3


def test_units_have_odd_constant_term():
    # S is local at (2, X, Y, V): a polynomial is a unit exactly when
    # its constant coefficient is odd (it then avoids the maximal ideal).
    assert RING.const(3).is_unit()
    assert RING.const(-1).is_unit()
    assert (X + RING.const(3)).is_unit()
    assert not RING.const(2).is_unit()
    assert not X.is_unit()
    assert not (X + RING.const(2)).is_unit()
    assert not RING.zero().is_unit()


def test_divide_exact():
    p = (X + Y) * (V - RING.const(2))
    assert divide_exact(p, X + Y) == V - RING.const(2)
    assert is_divisible(p, V - RING.const(2))
    assert not is_divisible(p, X - Y)
    with pytest.raises(NotDivisibleError):
        divide_exact(p, X - Y)
    with pytest.raises(NotDivisibleError):
        divide_exact(X, RING.zero())


def test_divide_exact_random_roundtrip():
    rng = random.Random(101)
    checked = 0
    while checked < 200:
        a = rand_poly(rng, RING)
        b = rand_poly(rng, RING)
        if b.is_zero():
            continue
        assert divide_exact(a * b, b) == a
        checked += 1


def test_partial_derivative():
    p = X * X * Y + V.scale(3) + RING.const(11)
    assert partial_derivative(p, 0) == (X * Y).scale(2)
    assert partial_derivative(p, 1) == X * X
    assert partial_derivative(p, 2) == RING.const(3)


def test_substitute_ints():
    big = BaseRing(("X", "Y", "s"))
    p = parse_poly("X^2+2*s*Y+s^2", big)
    target = BaseRing(("X", "Y"))
    q = substitute_ints(p, {"s": 3}, target)
    assert q == parse_poly("X^2+6*Y+9", target)
    # Substituting nothing is a ring change only.
    r = substitute_ints(parse_poly("X*Y", big), {"s": 5}, target)
    assert r == parse_poly("X*Y", target)


def test_parse_basic():
    assert parse_poly("X^2*Y - 3*Y + 7", RING) == X * X * Y - Y.scale(3) + RING.const(7)
    assert parse_poly("-X^2+4", RING) == -(X * X) + RING.const(4)
    assert parse_poly("(X+Y)^2", RING) == (X + Y) ** 2
    assert parse_poly("2*(X - (Y - V))", RING) == (X - Y + V).scale(2)
    assert parse_poly("0", RING).is_zero()
    assert parse_poly("-2^2", RING) == RING.const(-4)


def test_parse_errors():
    with pytest.raises(PolyParseError):
        parse_poly("X^2+++", RING)
    with pytest.raises(PolyParseError):
        parse_poly("", RING)
    with pytest.raises(PolyParseError):
        parse_poly("(X+Y", RING)
    with pytest.raises(UnknownVariableError):
        parse_poly("X+Z", RING)
    with pytest.raises(PolyParseError):
        parse_poly("X^-1", RING)


def test_format_roundtrip_random():
    rng = random.Random(202)
    for _ in range(300):
        p = rand_poly(rng, RING)
        assert parse_poly(format_poly(p), RING) == p


def test_format_canonical():
    # Graded lex, explicit '*' and '^', no spaces.
    assert format_poly(X * X * Y - Y.scale(3) + RING.const(7)) == "X^2*Y-3*Y+7"
    assert format_poly(RING.zero()) == "0"
    assert format_poly(-X) == "-X"
    assert format_poly(Y + X) == "X+Y"
    assert str(V * Y * X) == "X*Y*V"


def test_reduce_mod2():
    r = reduce_mod2(X * X + Y.scale(3) + RING.const(4))
    assert str(r) == "X^2+Y"
    assert reduce_mod2(X.scale(2)).is_zero()
    assert reduce_mod2(RING.const(5)).is_one()
    assert f2_zero(RING).is_zero()
    assert f2_one(RING).is_unit()


def test_lift_and_parity():
    r = reduce_mod2(X * Y + RING.const(1))
    assert reduce_mod2(lift_f2(r)) == r
    assert is_even(X.scale(2) + RING.const(4))
    assert not is_even(X.scale(2) + RING.const(3))
    assert half(X.scale(2) + RING.const(4)) == X + RING.const(2)
    with pytest.raises(NotDivisibleError):
        half(X + RING.const(2))


def test_sqrt_f2():
    assert sqrt_f2(reduce_mod2((X * Y + V).scale(1) ** 2)) == reduce_mod2(X * Y + V)
    assert sqrt_f2(reduce_mod2(X * Y)) is None
    assert sqrt_f2(f2_zero(RING)).is_zero()
    assert sqrt_f2(f2_one(RING)).is_one()


def test_f2_division():
    a = reduce_mod2((X + Y) * (X * Y + RING.const(1)))
    b = reduce_mod2(X + Y)
    assert f2_is_divisible(a, b)
    assert f2_divide_exact(a, b) == reduce_mod2(X * Y + RING.const(1))
    assert not f2_is_divisible(reduce_mod2(X), reduce_mod2(Y))


def test_hash_consistency():
    seen = {X + Y: "a"}
    assert seen[Y + X] == "a"
