"""Acceptance criteria 1-9, each reported as one PASS/FAIL line."""

import io
import random
import time

import pytest
import yaml

from krullmod.autom import VarChange, compose, identity, monicize, nested_shear, power_subst, shear_swap
from krullmod.cli import main
from krullmod.coeff import DualNumbers, PrimeField, Rationals
from krullmod.config import limits
from krullmod.errors import ResourceLimit
from krullmod.krull import (HUNT_SEED, catalog, check_fg_dim_equality, check_fixed_coordinate_profile, check_kdc,
                            check_torsion_dimension_drop, dim_descent, hunt_profile_mismatches, random_cyclic,
                            random_sample)
from krullmod.modpres import ModulePresentation, is_torsion_module, torsion_profile
from krullmod.nilrad import (check_artinian_profile, is_zero_module, n_torsion_profile, random_artinian_module,
                             reduce_mod_N)
from krullmod.poly import MINUS_INFINITY, Poly, parse_poly, random_poly
from test_cli import DATA, GOLDEN, GOLDEN_CASES

Q, F5, F7 = Rationals(), PrimeField(5), PrimeField(7)
RANDOM_PER_FIELD = 110
SWEEP_SEEDS = {"F5": 2024, "Q": 2025}


# -- shared sweep for criteria 3, 4, 5 and 6 -----------------------------------------

@pytest.fixture(scope="module")
def sweep():
    """Catalog plus seeded random cyclic modules with their dimension reports."""
    cases = [(f"catalog: {e.name}", e.presentation, e.expected_dim) for e in catalog()]
    for ring in (F5, Q):
        rng = random.Random(SWEEP_SEEDS[ring.descriptor()])
        for i in range(RANDOM_PER_FIELD):
            n = rng.randint(1, 4)
            cases.append((f"random {ring.descriptor()} #{i}", random_cyclic(ring, n, rng, 3, 3), None))
    done, limited = [], []
    for name, P, expected in cases:
        try:
            # coefficient blowups over Q become ResourceLimit instead of stalls
            with limits(max_coeff_bits=2048):
                done.append((name, P, expected, dim_descent(P, strict=False)))
        except ResourceLimit:
            limited.append(name)
    return done, limited, len(cases)


# -- 1 ----------------------------------------------------------------------------------

def _round_trip(phi, polys):
    n, R = phi.nvars, phi.ring
    for i, x in enumerate(Poly.gens(R, n)):
        if phi.apply(phi.pullback(x)) != x or phi.pullback(phi.apply(x)) != x:
            return False
        if Poly.substitute(phi.backward[i], list(phi.forward)) != x:
            return False
    return all(phi.pullback(phi.apply(f)) == f and phi.apply(phi.pullback(f)) == f for f in polys)


def _linear_step(n, R, rng):
    """A swap or an elementary linear shear x_i -> x_i + c*x_j."""
    i, j = rng.sample(range(n), 2)
    x = Poly.gens(R, n)
    if rng.random() < 0.3:
        x[i], x[j] = x[j], x[i]
        return VarChange(R, n, x, x, f"swap({i + 1},{j + 1})")
    c = R.random_element(rng)
    fwd, bwd = list(x), list(x)
    fwd[i] = x[i] - x[j] * Poly.const(R, n, c)
    bwd[i] = x[i] + x[j] * Poly.const(R, n, c)
    return VarChange(R, n, fwd, bwd, f"linear({i + 1},{j + 1})")


def _random_composite(n, R, rng):
    """Two or three factors: one nonlinear shear, the rest swaps and linear shears."""
    parts = []
    heavy = rng.randrange(3)
    for j in range(rng.randint(2, 3)):
        if j != heavy:
            parts.append(_linear_step(n, R, rng))
            continue
        if rng.randrange(2) and n >= 3:
            parts.append(nested_shear(n, 1, 1, R)[0])
        else:
            parts.append(shear_swap(n, 2, R))
    out = identity(n, R)
    for p in parts:
        out = compose(out, p)
    return out


def test_criterion_1_automorphism_round_trips(criterion):
    t0 = time.perf_counter()
    bad, checked = [], 0
    for R in (Q, F7):
        rng = random.Random(101)
        pools = {n: [random_poly(R, n, rng, max_deg=6, max_terms=3) for _ in range(200)] for n in range(2, 6)}
        named = []
        for n in range(2, 6):
            named += [shear_swap(n, 2, R), power_subst(n, 2, R)]
            if n >= 3:
                named += list(nested_shear(n, 2, 2, R))
        for phi in named:
            checked += 1
            if not _round_trip(phi, pools[phi.nvars]):
                bad.append(phi.label)
        for k in range(50):
            n = 2 + k % 4
            phi = _random_composite(n, R, rng)
            checked += 1
            if not _round_trip(phi, pools[n]):
                bad.append(phi.label)
    elapsed = time.perf_counter() - t0
    criterion(1, not bad and elapsed < 10,
              f"{checked} changes round-trip exactly over Q and F7, {len(bad)} failures, {elapsed:.1f}s (< 10s)")


# -- 2 ----------------------------------------------------------------------------------

def test_criterion_2_monicization(criterion):
    bad, worst, count = [], 0.0, 0
    for R in (Q, F5, F7):
        rng = random.Random(202)
        for _ in range(100):
            n = rng.randint(1, 4)
            f = random_poly(R, n, rng, max_deg=4, max_terms=4, nonzero=True)
            for strategy in ("power", "linear"):
                t = time.perf_counter()
                phi, g = monicize(f, strategy)
                worst = max(worst, time.perf_counter() - t)
                count += 1
                lead = g.coeffs_in_last()[-1]
                image = phi.apply(f)
                ok = (lead.is_constant() and lead.constant_term() == R.one()
                      and g == image.scale(R.inv(image.coeffs_in_last()[-1].constant_term()))
                      and g.degree_in(n) <= (1 + f.max_var_degree()) ** n)
                if not ok or not phi.is_valid():
                    bad.append((R.descriptor(), f.format(), strategy))
    criterion(2, not bad and worst < 1,
              f"{count} monicizations (100 per field and strategy), {len(bad)} failures, slowest {worst:.3f}s (< 1s)")


# -- 3 ----------------------------------------------------------------------------------

def test_criterion_3_dimension_agreement(sweep, criterion):
    done, limited, total = sweep
    disagree = [name for name, _, exp, rep in done
                if not rep.agree or (exp is not None and rep.dim_descent != exp)]
    n_random = total - 20
    cat_ok = sum(name.startswith("catalog") for name, *_ in done) == 20
    rate = len(limited) / total
    criterion(3, not disagree and cat_ok and n_random >= 200 and rate < 0.05,
              f"{len(done)} agree of {total} (20 catalog + {n_random} random over F5 and Q), "
              f"{len(disagree)} disagreements, ResourceLimit {len(limited)} ({100 * rate:.1f}% < 5%)"
              + (f" limited: {', '.join(limited)}" if limited else ""))


# -- 4 ----------------------------------------------------------------------------------

def test_criterion_4_post_chain_profile(sweep, criterion):
    done, _, _ = sweep
    bad_threshold, bad_drop, drops = [], [], 0
    for name, P, _, rep in done:
        if rep.dim_descent == MINUS_INFINITY:
            continue
        prof = rep.profile_after
        m = rep.dim_descent
        if not (prof.threshold == m + 1 and not prof.flags[m] and all(prof.flags[m + 1:])):
            bad_threshold.append(name)
        for s in rep.steps:
            if s.presentation.is_zero_module():
                continue
            drops += 1
            if not check_torsion_dimension_drop(s.presentation).ok:
                bad_drop.append(name)
    criterion(4, not bad_threshold and not bad_drop,
              f"post-chain threshold = dim + 1 on all {len(done)} instances ({len(bad_threshold)} failures); "
              f"torsion iff dim < m on {drops} descended presentations ({len(bad_drop)} failures)")


# -- 5 ----------------------------------------------------------------------------------

def test_criterion_5_kdc_and_torsion_at_B(sweep, criterion):
    rng = random.Random(505)
    bad_kdc, rows = [], 0
    for e in catalog():
        P = e.presentation
        sample = random_sample(P, rng, count=10)
        for m in range(P.nvars + 1):
            rep = check_kdc(P, m, sample)
            rows += len(rep.rows)
            if not rep.ok:
                bad_kdc.append((e.name, m))
    done, _, _ = sweep
    bad_torsion = [name for name, P, _, rep in done
                   if rep.dim_descent != MINUS_INFINITY
                   and is_torsion_module(P, P.nvars) != (rep.dim_descent < P.nvars)]
    criterion(5, not bad_kdc and not bad_torsion,
              f"KDC holds on {rows} (element, m) rows over the catalog ({len(bad_kdc)} failures); "
              f"torsion over B iff dim < n on {len(done)} instances ({len(bad_torsion)} failures)")


# -- 6 ----------------------------------------------------------------------------------

def test_criterion_6_fg_dimension_equality(sweep, criterion):
    done, _, _ = sweep
    bad, checked = [], 0
    for name, P, _, rep in done:
        for s in rep.steps:
            if s.presentation.is_zero_module():
                continue
            checked += 1
            if not check_fg_dim_equality(P, s.presentation):
                bad.append((name, s.level))
    criterion(6, checked > 0 and not bad,
              f"dimension over n variables equals dimension over the reduced count on {checked} "
              f"descended presentations ({len(bad)} failures)")


# -- 7 ----------------------------------------------------------------------------------

def test_criterion_7_fixed_coordinate_probe(criterion):
    axis = check_fixed_coordinate_profile(ModulePresentation.cyclic([parse_poly("x1", F5, 2)]))
    hyper = check_fixed_coordinate_profile(ModulePresentation.cyclic([parse_poly("x1*x2 - 1", F5, 2)]))
    free = check_fixed_coordinate_profile(ModulePresentation.free(F5, 2))
    first = hunt_profile_mismatches(seed=HUNT_SEED)
    again = hunt_profile_mismatches(seed=HUNT_SEED, workers=2)
    ok = (not axis.match and (axis.profile.m_profile, axis.dim) == (0, 1)
          and "MISMATCH" in axis.summary() and hyper.match and free.match
          and len(first["mismatches"]) >= 1 and first == again)
    criterion(7, ok,
              f"<x1>: {axis.summary()}; <x1*x2 - 1> {'MATCH' if hyper.match else 'MISMATCH'}; "
              f"free {'MATCH' if free.match else 'MISMATCH'}; hunt seed {HUNT_SEED}: "
              f"{len(first['mismatches'])} mismatches in {first['checked']} checked, identical on rerun")


# -- 8 ----------------------------------------------------------------------------------

def test_criterion_8_artinian_coefficients(criterion):
    A = DualNumbers(PrimeField(3), 2)
    t0 = time.perf_counter()
    rng = random.Random(808)
    modules, failures, stf_checked, zero = 0, [], 0, 0
    while modules < 24:
        n = rng.randint(1, 2)
        P = random_artinian_module(A, n, rng)
        if is_zero_module(P):
            zero += 1
            continue
        modules += 1
        rep = check_artinian_profile(P, rng=rng)
        # profile via reduction vs the field-case profile of M/MN
        if n_torsion_profile(P, "reduce") != torsion_profile(reduce_mod_N(P)):
            failures.append("reduction route differs from M/MN")
        failures += rep.failures
        if not 0 <= rep.dim_reduced <= n:
            failures.append(f"dimension {rep.dim_reduced} outside 0..{n}")
        if rep.s_torsion_free is False:
            failures.append("s-torsion-freeness failed")
        stf_checked += rep.samples_checked
    elapsed = time.perf_counter() - t0
    criterion(8, not failures and elapsed < 30,
              f"{modules} nonzero modules over F3[u]/(u^2) (n <= 2, {zero} zero modules skipped): "
              f"profiles agree, 0 <= dim <= n, s-torsion-free on {stf_checked} nonzero samples; "
              f"{len(failures)} failures, {elapsed:.1f}s (< 30s)")


# -- 9 ----------------------------------------------------------------------------------

def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return main([str(a) for a in argv], out=out, err=err), out.getvalue()


def test_criterion_9_cli_determinism(criterion):
    code, report = _cli("verify", "--catalog")
    same = _cli("verify", "--catalog")[1] == report
    hunts = {_cli("hunt", "--count", "25", "--seed", "99")[1] for _ in range(2)}
    golden = {}
    for name, argv in GOLDEN_CASES.items():
        if name.split("_")[0] in ("dim", "profile", "monicize"):
            golden[name] = _cli(*argv)[1] == (GOLDEN / f"{name}.yaml").read_text()
    doc = yaml.safe_load(report)
    ok = code == 0 and doc["failed"] == 0 and same and len(hunts) == 1 and all(golden.values())
    criterion(9, ok,
              f"verify --catalog exit {code} ({doc['passed']}/20 passed), byte-identical reruns: "
              f"{same and len(hunts) == 1}; golden files {sum(golden.values())}/{len(golden)} match")
