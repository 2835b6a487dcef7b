"""Torsion modulo the nilradical over artinian coefficient rings.

Two coefficient rings are supported.  ``DualNumbers(F, m) = F[u]/(u^m)`` has
nilradical ``N = (u)`` and residue field ``F``; ``ProductField(F, r) = F^r``
is reduced, so ``N = 0`` and everything splits into ``r`` field problems.

Over ``A[x1..xn]`` with ``A = F[u]/(u^m)`` an element ``d`` is regular modulo
the nilradical iff its reduction mod ``u`` is nonzero.  Two independent
routes are implemented:

* reduction: pass to ``M/MN``, a module over ``F[x1..xn]``;
* lift: view ``M`` as a module over ``F[u, x1..xn]`` (``u`` is the first
  variable) with the extra relations ``u^m * e_i``.  Then ``y`` is
  ``N``-torsion over the first ``k`` variables iff
  ``Ann(y) ∩ F[u, x1..xk]`` contains an element not divisible by ``u``.

For whole modules both routes must give the same profile and dimension,
because ``M`` and ``M/MN`` have the same support when ``N`` is nilpotent.
Element by element only the lift is faithful: ``u`` in ``A[x]`` reduces to
zero but no ``d`` outside ``(u)`` kills it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .coeff import Coeff, CoeffRing, DualNumbers, PrimeField, ProductField
from .errors import UnsupportedRing, ZeroModule
from .gb import FreeElem, element_annihilator, eliminate, lt_dimension
from .modpres import ModulePresentation, TorsionProfile, is_torsion_element, torsion_profile
from .poly import MINUS_INFINITY, Poly, random_poly


@dataclass(frozen=True)
class NilData:
    """Nilradical and residue ring of an artinian coefficient ring."""

    ring: CoeffRing
    nilpotency: int        # least t with N^t = 0 (1 when N = 0)
    residue: CoeffRing     # A/N

    def describe(self) -> str:
        return "N = (u)" if self.nilpotency > 1 else "N = 0"


def nil_data(ring: CoeffRing) -> NilData:
    if isinstance(ring, DualNumbers):
        return NilData(ring, ring.m, ring.base)
    if isinstance(ring, ProductField):
        return NilData(ring, 1, ring)
    raise UnsupportedRing(f"no nilradical data for {ring.descriptor()}")


def is_CN_regular(c: Coeff) -> bool:
    """The residue of ``c`` in ``A/N`` is regular."""
    R = c.ring
    if isinstance(R, DualNumbers):
        return not R.base.is_zero(c.value[0])
    if isinstance(R, ProductField):
        return R.is_unit(c.value)
    raise UnsupportedRing(f"regularity mod N is only defined here for artinian rings, not {R.descriptor()}")


def ring_elements(ring: CoeffRing) -> list[Coeff]:
    """All elements of a finite artinian ring (prime-field base only)."""
    if not isinstance(ring, (DualNumbers, ProductField)) or not isinstance(ring.base, PrimeField):
        raise UnsupportedRing("enumeration needs an artinian ring over a prime field")
    width = ring.m if isinstance(ring, DualNumbers) else ring.r
    return [Coeff(ring, v) for v in itertools.product(range(ring.base.p), repeat=width)]


def nilradical_elements(ring: CoeffRing) -> list[Coeff]:
    nd = nil_data(ring)
    if nd.nilpotency == 1:
        return [Coeff(ring, ring.zero())]
    return [c for c in ring_elements(ring) if not is_CN_regular(c)]


# -- the two routes ------------------------------------------------------------

def reduce_mod_N(P: ModulePresentation) -> ModulePresentation:
    """``M/MN`` over ``(A/N)[x1..xn]``: coefficients mapped through ``A -> A/N``."""
    R = P.ring
    if not isinstance(R, DualNumbers):
        raise UnsupportedRing("reduction mod N is implemented for F[u]/(u^m) coefficients")
    return P.map_coeffs(lambda v: v[0], R.base)


def split_components(P: ModulePresentation) -> list[ModulePresentation]:
    """``M = M e_1 + ... + M e_r`` over ``F^r``: one field-case presentation per factor."""
    R = P.ring
    if not isinstance(R, ProductField):
        raise UnsupportedRing("componentwise split needs a product of fields")
    return [P.map_coeffs(lambda v, j=j: v[j], R.base) for j in range(R.r)]


def lift_poly(f: Poly) -> Poly:
    """``f`` over ``F[u]/(u^m)`` as a polynomial over ``F`` in ``(u, x1..xn)``."""
    R = f.ring
    terms = {}
    for e, v in f.terms.items():
        for j, a in enumerate(v):
            if not R.base.is_zero(a):
                terms[(j,) + e] = a
    return Poly(R.base, f.nvars + 1, terms, normalized=True)


def lift_element(y: FreeElem) -> FreeElem:
    return y.map(lift_poly)


def lift_presentation(P: ModulePresentation) -> ModulePresentation:
    """``M`` as a module over ``F[u, x1..xn]``, with ``u^m * e_i`` among the relations."""
    R = P.ring
    if not isinstance(R, DualNumbers):
        raise UnsupportedRing("the lift is implemented for F[u]/(u^m) coefficients")
    n1 = P.nvars + 1
    zero = Poly.zero(R.base, n1)
    rels = [lift_element(r) for r in P.relations]
    um = Poly.monomial(R.base, n1, (R.m,) + (0,) * P.nvars)
    for i in range(P.rank):
        rels.append(FreeElem([um if j == i else zero for j in range(P.rank)]))
    return ModulePresentation(R.base, n1, P.rank, rels, P.names)


def _not_in_u(f: Poly) -> bool:
    return any(e[0] == 0 for e in f.terms)


def _lift_torsion(L: ModulePresentation, y: FreeElem, k: int) -> bool:
    ann = element_annihilator(L, y)
    if ann.is_zero():
        return False
    return any(_not_in_u(g) for g in eliminate(ann, k + 1).gens)


def is_zero_in_module(P: ModulePresentation, y: FreeElem) -> bool:
    """Whether ``y`` is zero in ``M`` (exact, through the lift or the split)."""
    R = P.ring
    if isinstance(R, DualNumbers):
        return lift_presentation(P).is_zero_element(lift_element(y))
    if isinstance(R, ProductField):
        return all(Pj.is_zero_element(y.map(lambda p, j=j: p.map_coeffs(lambda v: v[j], R.base)))
                   for j, Pj in enumerate(split_components(P)))
    return P.is_zero_element(y)


def is_N_torsion(P: ModulePresentation, y: FreeElem, k: int) -> bool:
    """Some ``d`` in ``A[x1..xk]``, regular modulo the nilradical, kills ``y``."""
    if not 0 <= k <= P.nvars:
        raise ValueError(f"subring index {k} outside 0..{P.nvars}")
    R = P.ring
    if isinstance(R, DualNumbers):
        return _lift_torsion(lift_presentation(P), lift_element(y), k)
    if isinstance(R, ProductField):
        comps = split_components(P)
        return all(is_torsion_element(Pj, y.map(lambda p, j=j: p.map_coeffs(lambda v: v[j], R.base)), k)
                   for j, Pj in enumerate(comps))
    raise UnsupportedRing(f"N-torsion is implemented for artinian rings, not {R.descriptor()}")


def is_N_torsion_module(P: ModulePresentation, k: int) -> bool:
    return all(is_N_torsion(P, g, k) for g in P.generators())


def n_torsion_profile(P: ModulePresentation, route: str = "lift") -> TorsionProfile:
    """``N``-torsion flags for ``k = 0..n``.

    ``route="lift"`` decides each flag through :func:`is_N_torsion`;
    ``route="reduce"`` is the field-case profile of ``M/MN`` (or of the
    components, combined with ``and``).
    """
    if is_zero_module(P):
        raise ZeroModule("the zero module has no torsion profile")
    n = P.nvars
    if route == "lift":
        return TorsionProfile(tuple(is_N_torsion_module(P, k) for k in range(n + 1)))
    if route != "reduce":
        raise ValueError(f"unknown route {route!r}")
    if isinstance(P.ring, ProductField):
        flags = [True] * (n + 1)
        for Pj in split_components(P):
            if Pj.is_zero_module():
                continue
            flags = [a and b for a, b in zip(flags, torsion_profile(Pj).flags)]
        return TorsionProfile(tuple(flags))
    return torsion_profile(reduce_mod_N(P))


def is_zero_module(P: ModulePresentation) -> bool:
    return all(is_zero_in_module(P, g) for g in P.generators())


def n_dimension(P: ModulePresentation, route: str = "lift"):
    """Dimension of ``M`` (``MINUS_INFINITY`` for zero) by either route."""
    from .krull import dim_oracle

    R = P.ring
    if isinstance(R, ProductField):
        return max(dim_oracle(Pj) for Pj in split_components(P))
    if route == "reduce":
        return dim_oracle(reduce_mod_N(P))
    L = lift_presentation(P)
    return max((lt_dimension(a) for a in L.annihilators()), default=MINUS_INFINITY)


# -- the checker ---------------------------------------------------------------

@dataclass
class ArtinianReport:
    ring: str
    nvars: int
    dim_reduced: object
    dim_lift: object
    profile_reduced: TorsionProfile
    profile_lift: TorsionProfile
    threshold_after_descent: int
    s_torsion_free: bool | None       # None: nothing to check (no nonzero samples)
    samples_checked: int
    failures: list[str] = field(default_factory=list)

    @property
    def fixed_coordinate_match(self) -> bool:
        return self.profile_reduced.m_profile == self.dim_reduced

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "nvars": self.nvars,
            "dim_reduced": self.dim_reduced,
            "dim_lift": self.dim_lift,
            "profile_reduced": self.profile_reduced.to_dict(),
            "profile_lift": self.profile_lift.to_dict(),
            "threshold_after_descent": self.threshold_after_descent,
            "fixed_coordinate_match": self.fixed_coordinate_match,
            "s_torsion_free": self.s_torsion_free,
            "samples_checked": self.samples_checked,
            "failures": list(self.failures),
        }


def reduced_view(P: ModulePresentation) -> list[ModulePresentation]:
    """Field-case presentations with the same support as ``M`` (nonzero pieces only)."""
    if isinstance(P.ring, ProductField):
        return [Pj for Pj in split_components(P) if not Pj.is_zero_module()]
    return [reduce_mod_N(P)]


def check_artinian_profile(P: ModulePresentation, sample: Sequence[FreeElem] | None = None,
                           rng: random.Random | None = None, extra: int = 4) -> ArtinianReport:
    """Profile and dimension statements for a module over an artinian ``A[x]``.

    Checks: both routes give the same ``N``-torsion profile and dimension;
    ``0 <= dim <= n``; after the descent chain on the reduced module the
    threshold is ``dim + 1``; every nonzero sample element ``y`` satisfies
    ``d*y != 0`` for every ``d`` in ``A`` regular modulo ``N``.  The
    fixed-coordinate comparison ``m_profile == dim`` is reported, not required.
    """
    from .krull import dim_descent, random_sample

    nil_data(P.ring)
    if is_zero_module(P):
        raise ZeroModule("the zero module is outside the statement")
    n = P.nvars
    failures = []
    dim_red, dim_lift = n_dimension(P, "reduce"), n_dimension(P, "lift")
    if dim_red != dim_lift:
        failures.append(f"dimension differs: reduction {dim_red}, lift {dim_lift}")
    if not 0 <= dim_red <= n:
        failures.append(f"dimension {dim_red} outside 0..{n}")
    prof_red, prof_lift = n_torsion_profile(P, "reduce"), n_torsion_profile(P, "lift")
    if prof_red != prof_lift:
        failures.append(f"profiles differ: reduction {prof_red.flags}, lift {prof_lift.flags}")
    # after the chain each reduced piece has threshold dim + 1; the module's is the max
    after = max(dim_descent(Q).profile_after.threshold for Q in reduced_view(P))
    if after != dim_red + 1:
        failures.append(f"post-chain threshold {after} != dim + 1 = {dim_red + 1}")

    if sample is None:
        sample = random_sample(P, rng or random.Random(0), count=extra, max_deg=1)
    regular = [d for d in ring_elements(P.ring) if is_CN_regular(d)]
    checked = 0
    stf = True
    for y in sample:
        if is_zero_in_module(P, y):
            continue
        checked += 1
        for d in regular:
            if is_zero_in_module(P, y.map(lambda p: p.scale(d.value))):
                stf = False
                failures.append(f"{d.value} kills nonzero element {y.format()}")
                break
    return ArtinianReport(P.ring.descriptor(), n, dim_red, dim_lift, prof_red, prof_lift, after,
                          stf if checked else None, checked, failures)


def random_artinian_module(ring: CoeffRing, n: int, rng: random.Random, rank: int | None = None,
                           max_rels: int = 3, max_deg: int = 2) -> ModulePresentation:
    """Seeded presentation over ``ring[x1..xn]`` with rank 1 or 2."""
    rank = rank or rng.choice((1, 1, 2))
    rels = []
    for _ in range(rng.randint(1, max_rels)):
        row = [random_poly(ring, n, rng, max_deg=max_deg, max_terms=3) for _ in range(rank)]
        if any(not p.is_zero() for p in row):
            rels.append(FreeElem(row))
    return ModulePresentation(ring, n, rank, rels)
