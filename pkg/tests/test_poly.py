import random

import pytest
from hypothesis import given, strategies as st

from krullmod.config import limits
from krullmod.errors import ParseError, ResourceLimit, RingMismatch
from krullmod.poly import (GREVLEX, LEX, MINUS_INFINITY, Block, Poly, parse_order, parse_poly, random_poly,
                           substitute)
from sympy_oracle import to_sympy
from strategies import F5, F7, Q, polys

F2 = F7.__class__(2)


def p(text, ring=Q, n=2):
    return parse_poly(text, ring, n)


def test_arith_examples():
    assert p("x1 + x2") * p("x1 - x2") == p("x1^2 - x2^2")
    assert p("x1 + 3") + Poly.zero(Q, 2) == p("x1 + 3")
    assert p("x1 + 1", F2, 1) ** 2 == p("x1^2 + 1", F2, 1)


def test_leading_term_examples():
    f = p("x1*x2 + x2^3")
    assert f.leading_term(LEX) == ((1, 1), Q(1))
    assert f.leading_term(GREVLEX) == ((0, 3), Q(1))
    assert p("5").leading_term(GREVLEX) == ((0, 0), Q(5))


def test_degree_examples():
    f = p("x1^2*x2 + x2^3")
    assert f.degree_in(2) == 3 and f.degree_in(1) == 2
    assert Poly.zero(Q, 2).degree_in(1) == MINUS_INFINITY
    assert MINUS_INFINITY < 0 and MINUS_INFINITY < -10**9


def test_substitute_examples():
    images = [p("x2"), p("x1 + x2^2")]
    assert substitute(p("x2"), images) == p("x1 + x2^2")
    assert substitute(p("x1*x2 + 1"), images) == p("x2^3 + x1*x2 + 1")
    f = p("3*x1^2*x2 - x2 + 7")
    assert substitute(f, Poly.gens(Q, 2)) == f


def test_parse_examples():
    f = p("x1^2*x2 - 3")
    assert len(f) == 2 and f.coefficient((2, 1)) == 1 and f.coefficient((0, 0)) == -3
    assert p("0").terms == {}
    assert p("1/2*x1 + 1/2*x1").format() == "x1"


@pytest.mark.parametrize("text,col", [("x1 + * 2", 5), ("x1 ^", 4), ("x1 $ x2", 3), ("x3", 0)])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(ParseError) as info:
        parse_poly(text, Q, 2)
    assert info.value.pos == col


def test_orders():
    assert parse_order("lex") == LEX and parse_order("grevlex") == GREVLEX
    a, b = (1, 0, 0), (0, 0, 2)
    # block(1): x2, x3 dominate x1
    assert Block(1).key(b) > Block(1).key(a)
    assert LEX.key(a) > LEX.key(b)
    with pytest.raises(ValueError):
        parse_order("deglex")


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        p("x1") + p("x1", F5)
    with pytest.raises(RingMismatch):
        p("x1") + p("x1", Q, 3)


def test_term_ceiling():
    f = p("x1 + x2 + 1") ** 3
    with limits(max_terms=5):
        with pytest.raises(ResourceLimit):
            f * f


@pytest.mark.parametrize("ring", [Q, F7])
def test_substitution_is_a_homomorphism(ring):
    rng = random.Random(7)
    n = 3
    for _ in range(200):
        f, g = (random_poly(ring, n, rng, max_deg=3) for _ in range(2))
        images = [random_poly(ring, n, rng, max_deg=2) for _ in range(n)]
        assert substitute(f * g, images) == substitute(f, images) * substitute(g, images)
        assert substitute(f + g, images) == substitute(f, images) + substitute(g, images)


@pytest.mark.parametrize("order", [LEX, GREVLEX, Block(1)])
@pytest.mark.parametrize("ring", [Q, F7])
def test_leading_term_multiplicative(order, ring):
    @given(polys(ring, 3), polys(ring, 3))
    def check(f, g):
        if f.is_zero() or g.is_zero():
            return
        (ef, cf), (eg, cg) = f.leading_term(order), g.leading_term(order)
        assert (f * g).leading_term(order) == (tuple(a + b for a, b in zip(ef, eg)), cf * cg)
    check()


@pytest.mark.parametrize("ring", [Q, F5])
def test_parse_format_round_trip(ring):
    @given(polys(ring, 3))
    def check(f):
        assert parse_poly(f.format(), ring, 3) == f
        assert parse_poly(f.format("t"), ring, 3) == f
    check()


@given(polys(Q, 3), polys(Q, 3))
def test_arithmetic_matches_sympy(f, g):
    assert to_sympy(f * g).expand() == (to_sympy(f) * to_sympy(g)).expand()
    assert to_sympy(f - g).expand() == (to_sympy(f) - to_sympy(g)).expand()


@given(polys(F7, 2), st.integers(0, 4))
def test_power_is_repeated_product(f, k):
    out = Poly.const(F7, 2, 1)
    for _ in range(k):
        out = out * f
    assert f ** k == out


def test_coeffs_in_last_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        f = random_poly(Q, 3, rng, max_deg=4)
        assert Poly.from_coeffs_in_last(Q, 3, f.coeffs_in_last()) == f
