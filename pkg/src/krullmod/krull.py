"""Module dimension two ways, plus checkers for the dimension/torsion statements.

``dim_oracle`` reads the dimension off leading monomials of generator
annihilators.  ``dim_descent`` never looks at leading-monomial dimensions:
it repeatedly makes an annihilating polynomial monic in the last variable
and re-presents the module over one fewer variable, stopping as soon as the
module is not torsion over its full polynomial ring.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .autom import (VarChange, _linear_candidate, compose_all, identity, is_monic_in_last,
                    monicize, power_degree)
from .coeff import CoeffRing, PrimeField, Rationals, parse_ring
from .errors import ResourceLimit, ZeroModule
from .gb import FreeElem, Ideal, buchberger, eliminate, element_annihilator, lt_dimension, monomial_dimension
from .modpres import (ModulePresentation, TorsionProfile, annihilator_factors, descend,
                      greedy_witness, is_torsion_module, module_annihilator_witness, prune, torsion_profile)
from .poly import GREVLEX, MINUS_INFINITY, MonomialOrder, Poly, parse_poly, random_poly


# -- dimension -----------------------------------------------------------------

def dim_oracle(P: ModulePresentation, order: MonomialOrder = GREVLEX):
    """``dim M`` from one Groebner basis of the relation module.

    ``F/N`` and ``F/LT(N)`` share a Hilbert polynomial, and ``F/LT(N)`` splits
    into monomial quotients ``B/LT_i`` by position, so the dimension is the
    largest ``dim B/LT_i``.  This equals the max over generators of
    ``dim B/Ann(e_i)`` (see :func:`dim_from_annihilators`).  ``MINUS_INFINITY``
    for the zero module.
    """
    if order == GREVLEX:
        G = P.relation_basis()
    else:
        G = buchberger(P.relations, order, ring=P.ring, nvars=P.nvars, rank=P.rank, module_order="top")
    leads: list[list[tuple]] = [[] for _ in range(P.rank)]
    for lead in G.leading_monomials():
        leads[lead[0]].append(lead[1:])
    return max((monomial_dimension(ls, P.nvars) for ls in leads), default=MINUS_INFINITY)


def dim_from_annihilators(P: ModulePresentation, order: MonomialOrder = GREVLEX):
    """Max over generators of ``dim B/Ann(e_i)``; one annihilator basis per generator."""
    return max((lt_dimension(a, order) for a in P.annihilators()), default=MINUS_INFINITY)


def monic_cost(f: Poly, strategy: str = "linear"):
    """Last-variable degree :func:`monicize` would produce, without substituting."""
    n = f.nvars
    if is_monic_in_last(f):
        return f.degree_in(n)
    if strategy == "linear" and n > 1 and _linear_candidate(f) is not None:
        return f.total_degree()
    return power_degree(f)


def _normalized(g: Poly) -> Poly:
    return g.scale(g.ring.inv(g.coeffs_in_last()[-1].constant_term()))


@dataclass
class DescentStep:
    level: int                       # variables before this step
    change: VarChange                # on ``level`` variables
    witness: Poly                    # monic in t_level
    presentation: ModulePresentation  # over ``level - 1`` variables, pruned


@dataclass
class DimReport:
    dim_descent: object
    dim_oracle: object
    steps: list[DescentStep] = field(default_factory=list)
    composite: VarChange | None = None
    profile_before: TorsionProfile | None = None
    profile_after: TorsionProfile | None = None

    @property
    def agree(self) -> bool:
        return self.dim_descent == self.dim_oracle

    @property
    def chain(self) -> list[VarChange]:
        return [s.change for s in self.steps]

    @property
    def witnesses(self) -> list[Poly]:
        return [s.witness for s in self.steps]

    def to_dict(self) -> dict:
        def dim(v):
            return "-inf" if v == MINUS_INFINITY else v

        out = {
            "dim_descent": dim(self.dim_descent),
            "dim_oracle": dim(self.dim_oracle),
            "agree": self.agree,
            "chain": [],
        }
        for s in self.steps:
            out["chain"].append({
                "level": s.level,
                "change": s.change.to_dict(),
                "witness": s.witness.format("t"),
                "generators_after": s.presentation.rank,
                "relations_after": len(s.presentation.relations),
            })
        if self.composite is not None:
            out["composite"] = self.composite.to_dict()
        out["profiles"] = {
            "before": self.profile_before.to_dict() if self.profile_before else None,
            "after": self.profile_after.to_dict() if self.profile_after else None,
        }
        return out


def _plan_step(P: ModulePresentation, strategy: str):
    """Change of variables, monic witness and the polynomials handed to :func:`descend`.

    Two candidates: one greedy witness shared by all generators (rank
    ``k * e``), or one annihilator element per generator made monic by a
    common change (rank ``sum e_i``; the product of the factors is monic
    iff each factor is).  The one with the smaller generators-times-
    relations estimate wins; ties go to the shared witness.
    """
    k = P.rank
    cost = lambda f: (monic_cost(f, strategy), not is_monic_in_last(f), len(f))
    w = greedy_witness(P, cost)
    phi1, g1 = monicize(w, strategy)
    e1 = g1.degree_in(P.nvars)
    size1 = k * e1 * e1
    if k == 1:
        return phi1, g1, g1
    factors = annihilator_factors(P, cost)
    prod = Poly.const(P.ring, P.nvars, 1)
    for a in factors:
        prod = prod * a
    phi2, g2 = monicize(prod, strategy)
    split = [_normalized(phi2.apply(a)) for a in factors]
    degs = [h.degree_in(P.nvars) if not h.is_constant() else 0 for h in split]
    distinct = sum({h: d for h, d in zip(split, degs)}.values())
    size2 = sum(degs) * distinct
    if size2 < size1:
        return phi2, g2, split
    return phi1, g1, g1


def _final_witnesses(steps: list[DescentStep], n: int) -> list[Poly]:
    """Each step's witness rewritten through the later steps, in ``n`` variables.

    Later steps only move variables below the witness's level, so each lies
    in the matching prefix subring; they serve as torsion certificates.
    """
    out = []
    for i, s in enumerate(steps):
        w = s.witness
        for later in steps[i + 1:]:
            w = later.change.extend(s.level).apply(w)
        out.append(w.embed(n))
    return out


class DimensionMismatch(AssertionError):
    """Descent and the leading-monomial oracle disagree."""


def dim_descent(P: ModulePresentation, strategy: str = "linear", strict: bool = True,
                order: MonomialOrder = GREVLEX) -> DimReport:
    """Dimension by iterated monic descent, cross-checked against :func:`dim_oracle`.

    ``strategy`` is passed to :func:`monicize`; ``"linear"`` tries a
    deterministic small linear shear first (keeps degrees low), ``"power"``
    always uses the power substitution.  With ``strict`` a disagreement
    raises :class:`DimensionMismatch`; otherwise it is left in the report.
    ``order`` is the monomial order the oracle reads.
    """
    n = P.nvars
    oracle = dim_oracle(P, order)
    if P.is_zero_module():
        rep = DimReport(MINUS_INFINITY, oracle, composite=identity(n, P.ring))
    else:
        steps: list[DescentStep] = []
        cur, k = P, n
        while k > 0 and is_torsion_module(cur, k):
            phi, g, killers = _plan_step(cur, strategy)
            nxt = prune(descend(cur, phi, killers))
            steps.append(DescentStep(k, phi, g, nxt))
            cur, k = nxt, k - 1
        composite = compose_all([s.change for s in steps], n, P.ring)
        rep = DimReport(k, oracle, steps, composite, torsion_profile(P),
                        torsion_profile(P.rewrite(composite), _final_witnesses(steps, n)))
    if strict and not rep.agree:
        raise DimensionMismatch(f"descent gives {rep.dim_descent}, oracle gives {rep.dim_oracle}")
    return rep


# -- dimension-condition checkers --------------------------------------------

def _sub_dim(ann: Ideal, m: int):
    return lt_dimension(eliminate(ann, m))


@dataclass
class KDCReport:
    m: int
    rows: list[dict]
    strong: bool = False

    @property
    def ok(self) -> bool:
        return all(r["holds"] for r in self.rows)


def check_kdc(P: ModulePresentation, m: int, sample: Sequence[FreeElem]) -> KDCReport:
    """``|yB'_m| <= |yB|`` and ``|yB'_m| <= |yB'_{m+t}|`` for every sample element."""
    if not 0 <= m <= P.nvars:
        raise ValueError(f"subring index {m} outside 0..{P.nvars}")
    rows = []
    for y in sample:
        ann = element_annihilator(P, y)
        chain = [_sub_dim(ann, j) for j in range(m, P.nvars + 1)]
        full = chain[-1]
        rows.append({
            "element": y.format(),
            "sub_dim": chain[0],
            "full_dim": full,
            "chain": chain,
            "holds": chain[0] <= full and all(chain[0] <= c for c in chain[1:]),
        })
    return KDCReport(m, rows)


def check_strong_kdc(P: ModulePresentation, m: int, sample: Sequence[FreeElem]) -> KDCReport:
    """Reports which sample elements have ``|yB'_m| == |yB|``; never asserted."""
    rep = check_kdc(P, m, sample)
    for r in rep.rows:
        r["holds"] = r["sub_dim"] == r["full_dim"]
    rep.strong = True
    return rep


def check_fg_dim_equality(P_over_B: ModulePresentation, P_over_Bm: ModulePresentation) -> bool:
    """Same dimension over ``n`` and over ``m`` variables, and at most ``m``."""
    a, b = dim_oracle(P_over_B), dim_oracle(P_over_Bm)
    return a == b and b <= P_over_Bm.nvars


@dataclass
class DropReport:
    m: int
    dim: object
    torsion: bool

    @property
    def ok(self) -> bool:
        return (self.dim < self.m) == self.torsion and (self.dim == self.m) == (not self.torsion)


def check_torsion_dimension_drop(P_over_Bm: ModulePresentation, m: int | None = None) -> DropReport:
    """For a module over ``m`` variables: ``dim < m`` iff torsion, ``dim = m`` iff not."""
    m = P_over_Bm.nvars if m is None else m
    if m != P_over_Bm.nvars:
        raise ValueError("m must equal the presentation's variable count")
    if P_over_Bm.is_zero_module():
        raise ZeroModule("the zero module has no dimension to compare")
    return DropReport(m, dim_oracle(P_over_Bm), is_torsion_module(P_over_Bm, m))


@dataclass
class ProfileReport:
    profile: TorsionProfile
    dim: int

    @property
    def match(self) -> bool:
        return self.profile.m_profile == self.dim

    def summary(self) -> str:
        return (f"{self.profile.summary()}; m_profile={self.profile.m_profile} dim={self.dim} "
                f"{'MATCH' if self.match else 'MISMATCH'}")


def check_fixed_coordinate_profile(P: ModulePresentation) -> ProfileReport:
    """Compare the original-coordinate profile candidate ``s - 1`` with the dimension."""
    return ProfileReport(torsion_profile(P), dim_oracle(P))


# -- random instances and the hunt ---------------------------------------------

def random_ideal(ring: CoeffRing, n: int, rng: random.Random, max_gens: int = 3, max_deg: int = 3) -> Ideal:
    """Seeded ideal with 1..max_gens nonzero generators of degree <= max_deg."""
    zero = (0,) * n
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        f = random_poly(ring, n, rng, max_deg=max_deg, max_terms=4, nonzero=True)
        # half the generators vanish at the origin, so unit ideals stay a minority
        if rng.random() < 0.5 and len(f) > 1 and zero in f.terms:
            f = f - Poly.const(ring, n, f.constant_term())
        gens.append(f)
    return Ideal(ring, n, gens)


def random_cyclic(ring: CoeffRing, n: int, rng: random.Random, max_gens: int = 3,
                  max_deg: int = 3) -> ModulePresentation:
    return ModulePresentation.cyclic(random_ideal(ring, n, rng, max_gens, max_deg))


def random_sample(P: ModulePresentation, rng: random.Random, count: int = 10,
                  max_deg: int = 2) -> list[FreeElem]:
    """Generators followed by ``count`` random elements of the free module."""
    out = P.generators()
    while len(out) < P.rank + count:
        y = FreeElem([random_poly(P.ring, P.nvars, rng, max_deg=max_deg, max_terms=3) for _ in range(P.rank)])
        if not y.is_zero():
            out.append(y)
    return out


HUNT_SEED = 1616


def _hunt_one(job):
    idx, desc, n, gens = job
    ring = parse_ring(desc)
    J = Ideal(ring, n, [parse_poly(g, ring, n) for g in gens])
    P = ModulePresentation.cyclic(J) if J.gens else ModulePresentation.free(ring, n)
    try:
        if P.is_zero_module():
            return {"index": idx, "status": "zero"}
        rep = check_fixed_coordinate_profile(P)
    except ResourceLimit as exc:
        return {"index": idx, "status": "skipped", "reason": str(exc)}
    return {
        "index": idx,
        "status": "match" if rep.match else "mismatch",
        "ideal": list(gens),
        "flags": rep.profile.to_dict()["flags"],
        "m_profile": rep.profile.m_profile,
        "dim": rep.dim,
    }


def hunt_jobs(n: int, max_deg: int, count: int, seed: int, ring: CoeffRing | None = None,
              planted: bool = True) -> list[tuple]:
    ring = ring or PrimeField(5)
    rng = random.Random(seed)
    jobs = []
    for idx in range(count):
        if planted and idx == 0 and n >= 2:
            gens = [Poly.var(ring, n, 1)]
        else:
            gens = list(random_ideal(ring, n, rng, max_deg=max_deg).gens)
        jobs.append((idx, ring.descriptor(), n, [g.format() for g in gens]))
    return jobs


def hunt_profile_mismatches(n: int = 2, max_deg: int = 2, count: int = 50, seed: int = HUNT_SEED,
                            ring: CoeffRing | None = None, planted: bool = True,
                            workers: int = 1) -> dict:
    """Seeded random cyclic modules checked with :func:`check_fixed_coordinate_profile`.

    With ``planted`` the first instance is ``<x1>``.  Results come back in
    instance order regardless of ``workers``.
    """
    if not 1 <= n <= 4:
        raise ValueError("hunt supports 1 <= n <= 4")
    jobs = hunt_jobs(n, max_deg, count, seed, ring, planted)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_hunt_one, jobs))
    else:
        results = [_hunt_one(j) for j in jobs]
    mism = [r for r in results if r["status"] == "mismatch"]
    return {
        "seed": seed,
        "n": n,
        "max_deg": max_deg,
        "count": count,
        "checked": sum(r["status"] in ("match", "mismatch") for r in results),
        "skipped": sum(r["status"] == "skipped" for r in results),
        "zero_modules": sum(r["status"] == "zero" for r in results),
        "mismatches": mism,
    }


# -- catalog -------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    presentation: ModulePresentation
    expected_dim: int


def _ideal_entry(name, ring, n, polys, dim):
    gens = [parse_poly(p, ring, n) for p in polys]
    P = ModulePresentation.cyclic(gens) if gens else ModulePresentation.free(ring, n)
    return CatalogEntry(name, P, dim)


def _module_entry(name, ring, n, rows, dim):
    rels = [FreeElem([parse_poly(p, ring, n) for p in row]) for row in rows]
    return CatalogEntry(name, ModulePresentation(ring, n, len(rows[0]), rels), dim)


def catalog() -> list[CatalogEntry]:
    """Fixed modules with independently derived dimensions."""
    Q, F5 = Rationals(), PrimeField(5)
    return [
        _ideal_entry("zero ideal n=2", Q, 2, [], 2),
        _ideal_entry("zero ideal n=3", F5, 3, [], 3),
        _ideal_entry("origin n=2", Q, 2, ["x1", "x2"], 0),
        _ideal_entry("origin n=3", F5, 3, ["x1", "x2", "x3"], 0),
        _ideal_entry("hyperbola", Q, 2, ["x1*x2 - 1"], 1),
        _ideal_entry("plane and line", Q, 3, ["x1*x3", "x2*x3"], 2),
        _ideal_entry("first axis ideal", F5, 2, ["x1"], 1),
        _ideal_entry("second axis ideal", Q, 2, ["x2"], 1),
        _ideal_entry("hyperbola plus", F5, 2, ["x1*x2 + 1"], 1),
        _ideal_entry("two points", Q, 2, ["x1^2 - x2", "x1*x2 - x1"], 0),
        _ideal_entry("twisted cubic", Q, 3, ["x2 - x1^2", "x3 - x1^3"], 1),
        _ideal_entry("coordinate axes", F5, 3, ["x1*x2", "x1*x3", "x2*x3"], 1),
        _ideal_entry("circle", Q, 2, ["x1^2 + x2^2 - 1"], 1),
        _module_entry("diagonal rank 2", Q, 2, [["x1", "0"], ["0", "x2"]], 1),
        _module_entry("rank 2 one relation", Q, 2, [["x1", "-x2"]], 2),
        _module_entry("rank 2 symmetric", F5, 2, [["x1", "x2"], ["x2", "x1"]], 1),
        _ideal_entry("cubic curve", Q, 3, ["x1*x2*x3 - 1", "x1 + x2 + x3"], 1),
        _ideal_entry("determinantal", Q, 4, ["x1*x4 - x2*x3"], 3),
        _ideal_entry("fat line", F5, 3, ["x1", "x2^2"], 1),
        _ideal_entry("fat point n=1", Q, 1, ["x1^3"], 0),
    ]
