import random

import pytest
from hypothesis import given, settings, strategies as st

import sympy_oracle as oracle
from krullmod.errors import ResourceLimit, ZeroModule
from krullmod.gb import FreeElem
from krullmod.krull import (HUNT_SEED, DimensionMismatch, catalog, check_fg_dim_equality,
                            check_fixed_coordinate_profile, check_kdc, check_strong_kdc,
                            check_torsion_dimension_drop, dim_descent, dim_from_annihilators, dim_oracle, hunt_jobs,
                            hunt_profile_mismatches, random_cyclic, random_sample)
from krullmod.modpres import ModulePresentation
from krullmod.poly import LEX, MINUS_INFINITY, Poly, parse_poly
from strategies import F5, Q


def p(text, n=2, ring=Q):
    return parse_poly(text, ring, n)


def cyc(*texts, n=2, ring=Q):
    return ModulePresentation.cyclic([p(t, n, ring) for t in texts], ring, n)


def test_dim_oracle_examples():
    assert dim_oracle(ModulePresentation.free(Q, 3)) == 3
    assert dim_oracle(cyc("x1", "x2", "x3", n=3)) == 0
    assert dim_oracle(cyc("x1*x3", "x2*x3", n=3)) == 2
    assert dim_oracle(cyc("1")) == MINUS_INFINITY
    assert dim_oracle(cyc("x1*x3", "x2*x3", n=3), LEX) == 2


def test_oracle_routes_agree():
    # one relation basis versus one annihilator basis per generator
    for e in catalog():
        assert dim_oracle(e.presentation) == dim_from_annihilators(e.presentation), e.name
    rng = random.Random(77)
    for _ in range(30):
        P = random_cyclic(F5, rng.randint(1, 3), rng, 3, 3)
        assert dim_oracle(P) == dim_from_annihilators(P)


def test_dim_descent_examples():
    rep = dim_descent(cyc("x1*x2 + 1"))
    assert (rep.dim_descent, rep.dim_oracle, len(rep.steps)) == (1, 1, 1)
    assert rep.profile_after.flags == (False, False, True)
    rep = dim_descent(ModulePresentation.free(Q, 2))
    assert rep.dim_descent == 2 and rep.steps == []
    rep = dim_descent(cyc("x1", "x2"))
    assert rep.dim_descent == 0 and len(rep.steps) == 2
    assert rep.witnesses[0] == p("x2")
    rep = dim_descent(cyc("x1 + 1", "x1"))
    assert rep.dim_descent == MINUS_INFINITY == rep.dim_oracle and rep.steps == []


def test_power_strategy_matches():
    for texts in (("x1*x2 + 1",), ("x1", "x2"), ("x1^2 + x2^2 - 1",)):
        assert dim_descent(cyc(*texts), strategy="power").dim_descent == dim_oracle(cyc(*texts))


def test_witnesses_are_monic_and_chain_composes():
    rep = dim_descent(cyc("x2 - x1^2", "x3 - x1^3", n=3))
    for s in rep.steps:
        top = s.witness.coeffs_in_last()[-1]
        assert top.is_constant() and top.constant_term() == 1
    assert rep.composite.is_valid()


def test_kdc_examples():
    P = cyc("x1")
    rep = check_kdc(P, 1, [P.generator(0)])
    assert rep.ok and (rep.rows[0]["sub_dim"], rep.rows[0]["full_dim"]) == (0, 1)
    F = ModulePresentation.free(Q, 2)
    for m in range(3):
        r = check_kdc(F, m, [F.generator(0)]).rows[0]
        assert r["sub_dim"] == m and r["holds"]
    P = cyc("x2")
    r = check_kdc(P, 1, [P.generator(0)]).rows[0]
    assert (r["sub_dim"], r["full_dim"]) == (1, 1)


def test_strong_kdc_examples():
    P = cyc("x2")
    assert check_strong_kdc(P, 1, [P.generator(0)]).ok
    P = cyc("x1")
    assert not check_strong_kdc(P, 1, [P.generator(0)]).ok
    F = ModulePresentation.free(Q, 2)
    assert check_strong_kdc(F, 2, [F.generator(0)]).ok


def test_fg_dim_equality_examples():
    for texts, d in ((("x1*x2 + 1",), 1), (("x1", "x2"), 0), (("x2",), 1)):
        P = cyc(*texts)
        rep = dim_descent(P)
        for s in rep.steps:
            assert check_fg_dim_equality(P, s.presentation)
            if not s.presentation.is_zero_module():
                assert dim_oracle(s.presentation) == d


def test_torsion_drop_examples():
    rep = dim_descent(cyc("x1*x2 + 1"))
    r = check_torsion_dimension_drop(rep.steps[0].presentation)
    assert r.ok and (r.m, r.dim, r.torsion) == (1, 1, False)
    rep = dim_descent(cyc("x1", "x2"))
    r = check_torsion_dimension_drop(rep.steps[-1].presentation)
    assert r.ok and (r.m, r.dim, r.torsion) == (0, 0, False)
    r = check_torsion_dimension_drop(cyc("x1", n=1))
    assert r.ok and (r.dim, r.torsion) == (0, True)
    with pytest.raises(ZeroModule):
        check_torsion_dimension_drop(cyc("1"))
    with pytest.raises(ValueError):
        check_torsion_dimension_drop(cyc("x1"), 1)


def test_fixed_coordinate_profile_examples():
    rep = check_fixed_coordinate_profile(cyc("x1*x2 - 1"))
    assert rep.match and rep.profile.m_profile == 1
    rep = check_fixed_coordinate_profile(cyc("x1", ring=F5))
    assert not rep.match and (rep.profile.m_profile, rep.dim) == (0, 1)
    assert rep.summary() == "k=0 non-torsion, k=1 torsion, k=2 torsion; m_profile=0 dim=1 MISMATCH"
    rep = check_fixed_coordinate_profile(ModulePresentation.free(Q, 2))
    assert rep.match and rep.dim == 2


def test_hunt_examples():
    res = hunt_profile_mismatches(count=10)
    assert res["seed"] == HUNT_SEED
    assert res["mismatches"] and res["mismatches"][0]["ideal"] == ["x1"]
    assert hunt_profile_mismatches(count=0)["mismatches"] == []
    with pytest.raises(ValueError):
        hunt_profile_mismatches(n=5)


def test_hunt_pure_power_principal_has_no_mismatch():
    rng = random.Random(4)
    for _ in range(20):
        f = p("x2^3", ring=F5) + Poly(F5, 2, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(1, 4)})
        if f.degree_in(2) < 3:
            continue
        assert check_fixed_coordinate_profile(ModulePresentation.cyclic([f])).match


def test_hunt_deterministic_across_workers():
    a = hunt_profile_mismatches(count=12, seed=9)
    b = hunt_profile_mismatches(count=12, seed=9, workers=2)
    assert a == b
    assert hunt_jobs(2, 2, 5, 3) == hunt_jobs(2, 2, 5, 3)


def test_strict_mode_raises_on_disagreement(monkeypatch):
    import krullmod.krull as K
    monkeypatch.setattr(K, "dim_oracle", lambda P, order=None: 7)
    with pytest.raises(DimensionMismatch):
        K.dim_descent(cyc("x1"))
    assert not K.dim_descent(cyc("x1"), strict=False).agree


def test_catalog_shape():
    cat = catalog()
    assert len(cat) == 20 and len({e.name for e in cat}) == 20
    assert any(e.presentation.rank > 1 and e.presentation.relations for e in cat)


def test_catalog_cyclic_dims_match_sympy():
    for e in catalog():
        P = e.presentation
        if P.rank != 1:
            continue
        want = oracle.dimension(list(P.ideal().gens), P.nvars, P.ring)
        assert want == e.expected_dim, e.name


@pytest.mark.parametrize("ring", [Q, F5])
@settings(max_examples=20)
@given(seed=st.integers(0, 10**6))
def test_descent_agrees_with_sympy(ring, seed):
    P = random_cyclic(ring, 3, random.Random(seed), max_deg=2)
    try:
        rep = dim_descent(P, strict=False)
    except ResourceLimit:
        return
    want = oracle.dimension(list(P.ideal().gens), 3, ring)
    assert rep.dim_descent == (MINUS_INFINITY if want is None else want)
    if want is not None:
        assert rep.profile_after.threshold == want + 1


def test_random_sample_shape():
    P = cyc("x1")
    s = random_sample(P, random.Random(0), count=10)
    assert len(s) == 11 and s[0] == P.generator(0)
    assert all(isinstance(y, FreeElem) and not y.is_zero() for y in s)
