from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from krullmod.coeff import (Coeff, DualNumbers, PrimeField, ProductField, Rationals, arith, invert,
                            is_regular, parse_ring)
from krullmod.errors import NotAUnit, ParseError, RingMismatch

Q, F7, F2 = Rationals(), PrimeField(7), PrimeField(2)
A = DualNumbers(PrimeField(3), 2)
P = ProductField(PrimeField(3), 2)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)


def q_elems():
    return fractions.map(Q)


def f7_elems():
    return st.integers(0, 6).map(F7)


def dual_elems():
    return st.tuples(st.integers(0, 2), st.integers(0, 2)).map(A)


def prod_elems():
    return st.tuples(st.integers(0, 2), st.integers(0, 2)).map(P)


def test_examples():
    assert arith(Q("1/2"), Q("1/3"), "add") == Q("5/6")
    assert arith(F7(5), F7(4), "mul") == 6
    assert A("1+u") * A("1+2u") == A(1)
    assert invert(Q("3/4")) == Q("4/3")
    assert invert(F7(3)) == 5
    assert invert(A("1+u")) == A("1+2u")
    assert not is_regular(Q(0)) and is_regular(Q(5))
    assert not is_regular(A("u"))
    assert not is_regular(P("(1,0)")) and is_regular(P("(1,2)"))


def test_non_units_raise():
    for c in (Q(0), F7(0), A("u"), A("2u"), P("(0,1)")):
        with pytest.raises(NotAUnit):
            invert(c)


def test_mixed_rings_rejected():
    with pytest.raises(RingMismatch):
        F7(1) + PrimeField(5)(1)


def test_parse_ring_descriptors():
    assert parse_ring("Q") == Q
    assert parse_ring("F7") == F7
    assert parse_ring("F3[u]/(u^2)") == A
    assert parse_ring("F3xF3") == P
    for bad in ("F4", "R", "F3xF5", "F3[u]/(u^1)"):
        with pytest.raises((ParseError, ValueError)):
            parse_ring(bad)


def test_descriptor_round_trip():
    for R in (Q, F7, A, P, DualNumbers(Q, 3), ProductField(PrimeField(5), 3)):
        assert parse_ring(R.descriptor()) == R


def test_u_is_nilpotent_of_exact_order():
    B = DualNumbers(PrimeField(5), 3)
    u = Coeff(B, B.u())
    assert u ** 2 != 0 and u ** 3 == 0


@pytest.mark.parametrize("elems", [q_elems, f7_elems])
def test_field_axioms(elems):
    @given(elems(), elems(), elems())
    def check(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == 0
    check()


@pytest.mark.parametrize("elems", [q_elems, f7_elems])
def test_field_regular_iff_nonzero_iff_invertible(elems):
    @given(elems())
    def check(a):
        assert is_regular(a) == (not a.is_zero())
        if a.is_zero():
            with pytest.raises(NotAUnit):
                invert(a)
        else:
            assert a * invert(a) == 1
    check()


@given(dual_elems(), dual_elems(), dual_elems())
def test_dual_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(dual_elems())
def test_dual_unit_iff_constant_term_unit(a):
    unit = a.value[0] % 3 != 0
    assert a.ring.is_unit(a.value) == unit
    if unit:
        assert a * invert(a) == 1


@given(prod_elems(), prod_elems())
def test_product_componentwise(a, b):
    s, m = a * b, a + b
    for j in range(2):
        assert s.value[j] == (a.value[j] * b.value[j]) % 3
        assert m.value[j] == (a.value[j] + b.value[j]) % 3
    assert is_regular(a) == all(v % 3 for v in a.value)


@given(fractions)
def test_rational_literals_exact(q):
    assert Q(str(q)).value == Fraction(q)
