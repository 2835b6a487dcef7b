import random

import pytest
from hypothesis import given, settings, strategies as st

from krullmod.coeff import DualNumbers, PrimeField, ProductField
from krullmod.errors import UnsupportedRing, ZeroModule
from krullmod.gb import FreeElem
from krullmod.krull import dim_oracle
from krullmod.modpres import ModulePresentation, torsion_profile
from krullmod.nilrad import (check_artinian_profile, is_CN_regular, is_N_torsion, is_zero_in_module,
                             is_zero_module, n_dimension, n_torsion_profile, nil_data, nilradical_elements,
                             random_artinian_module, reduce_mod_N, split_components)
from krullmod.poly import Poly, parse_poly
from strategies import Q

F3 = PrimeField(3)
A = DualNumbers(F3, 2)
P3 = ProductField(F3, 2)


def p(text, n=1, ring=A):
    return parse_poly(text, ring, n)


def cyc(*texts, n=1, ring=A):
    return ModulePresentation.cyclic([p(t, n, ring) for t in texts], ring, n)


def test_regular_mod_N_examples():
    assert not is_CN_regular(A("u"))
    assert is_CN_regular(A("1+u"))
    assert is_CN_regular(A(2))
    assert not is_CN_regular(P3("(1,0)"))
    with pytest.raises(UnsupportedRing):
        is_CN_regular(Q(1))


def test_nil_data():
    assert nil_data(A).describe() == "N = (u)" and nil_data(A).residue == F3
    assert nil_data(P3).describe() == "N = 0"
    nil = nilradical_elements(A)
    assert len(nil) == 3
    for c in nil:
        assert c * c == 0


def test_reduce_examples():
    R = reduce_mod_N(cyc("u"))
    assert R.ring == F3 and R.relations == ()
    R = reduce_mod_N(cyc("(1+u)*x1"))
    assert R.relations == (FreeElem([parse_poly("x1", F3, 1)]),)
    R = reduce_mod_N(ModulePresentation.free(A, 1))
    assert R.rank == 1 and R.relations == ()


def test_N_torsion_examples():
    M = cyc("u")                                   # (A/N)[x1] as an A[x1]-module
    assert not is_N_torsion(M, M.generator(0), 0)
    M = cyc("x1", n=2)
    assert is_N_torsion(M, M.generator(0), 1)
    Z = cyc("1 + u")
    assert is_zero_module(Z)
    assert is_N_torsion(Z, Z.generator(0), 0)


def test_elementwise_reduction_is_not_faithful():
    F = ModulePresentation.free(A, 1)
    y = F.element([p("u")])
    assert reduce_mod_N(F).is_zero_element(y.map(lambda f: f.map_coeffs(lambda v: v[0], F3)))
    assert not is_zero_in_module(F, y)
    assert not is_N_torsion(F, y, 1)


def test_profiles_both_routes_examples():
    M = cyc("x1", n=2)
    assert n_torsion_profile(M, "lift").flags == n_torsion_profile(M, "reduce").flags == (False, True, True)
    assert n_dimension(M, "lift") == n_dimension(M, "reduce") == 1
    with pytest.raises(ZeroModule):
        n_torsion_profile(cyc("1"))


def test_product_field_componentwise():
    M = ModulePresentation.cyclic([parse_poly("(1,0)*x1", P3, 2)])
    comps = split_components(M)
    assert [dim_oracle(c) for c in comps] == [1, 2]
    assert n_dimension(M) == 2
    prof = n_torsion_profile(M)
    assert prof.flags == tuple(a and b for a, b in zip(*(torsion_profile(c).flags for c in comps)))
    assert not is_N_torsion(M, M.generator(0), 2)


def test_checker_on_examples():
    rep = check_artinian_profile(cyc("x1", n=2))
    assert rep.ok and rep.s_torsion_free and not rep.fixed_coordinate_match
    with pytest.raises(ZeroModule):
        check_artinian_profile(cyc("1 + u"))


@pytest.mark.parametrize("ring", [A, P3, DualNumbers(PrimeField(2), 3)])
@settings(max_examples=20)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 2))
def test_artinian_statements_hold(ring, seed, n):
    rng = random.Random(seed)
    M = random_artinian_module(ring, n, rng)
    if is_zero_module(M):
        return
    rep = check_artinian_profile(M, rng=rng)
    assert rep.ok, rep.failures
    assert 0 <= rep.dim_reduced <= n
