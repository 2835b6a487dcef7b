"""Finitely presented modules and their torsion behaviour over prefix subrings.

A presentation is ``B^k / U`` with ``U`` spanned by relation rows.  Torsion
over the prefix subring ``D[x1..xm]`` is decided per generator: the class
of ``e_i`` is torsion iff ``Ann(e_i) ∩ D[x1..xm] != 0``.  Since the
implemented coefficient rings are commutative fields, the torsion elements
form a submodule, so checking generators settles the whole module.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .autom import VarChange, is_monic_in_last
from .coeff import CoeffRing
from .config import get_limits
from .errors import NotMonic, NotTorsion, ResourceLimit, RingMismatch, ZeroModule
from .gb import FreeElem, Ideal, buchberger, element_annihilator, eliminate, normal_form
from .poly import GREVLEX, Poly


class ModulePresentation:
    """``B^rank / span(relations)`` over ``ring[x1..x_nvars]``; immutable."""

    def __init__(self, ring: CoeffRing, nvars: int, rank: int,
                 relations: Iterable[FreeElem | Sequence[Poly]] = (), names: Sequence[str] | None = None):
        if rank < 1:
            raise ValueError("rank must be positive (present the zero module as B/<1>)")
        rels = []
        for r in relations:
            if not isinstance(r, FreeElem):
                r = FreeElem(r)
            if r.rank != rank or r.nvars != nvars or r.ring != ring:
                raise RingMismatch("relation row does not match the presentation")
            if not r.is_zero():
                rels.append(r)
        self.ring = ring
        self.nvars = nvars
        self.rank = rank
        self.relations: tuple[FreeElem, ...] = tuple(rels)
        self.names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(rank))
        if len(self.names) != rank:
            raise ValueError("one display name per generator")
        self._ann: dict[int, Ideal] = {}
        self._gb = None
        self._lock = threading.Lock()

    # construction helpers
    @classmethod
    def cyclic(cls, gens: Ideal | Sequence[Poly], ring=None, nvars=None) -> "ModulePresentation":
        """``B/J`` as a rank-1 presentation."""
        if isinstance(gens, Ideal):
            ring, nvars, gens = gens.ring, gens.nvars, gens.gens
        gens = list(gens)
        if gens:
            ring, nvars = gens[0].ring, gens[0].nvars
        if ring is None:
            raise ValueError("ring data required for the zero ideal")
        return cls(ring, nvars, 1, [FreeElem([g]) for g in gens])

    @classmethod
    def free(cls, ring, nvars, rank=1) -> "ModulePresentation":
        return cls(ring, nvars, rank, [])

    @classmethod
    def zero_module(cls, ring, nvars) -> "ModulePresentation":
        return cls(ring, nvars, 1, [FreeElem([Poly.const(ring, nvars, 1)])])

    def generator(self, i: int) -> FreeElem:
        return FreeElem.basis(self.ring, self.nvars, self.rank, i)

    def generators(self) -> list[FreeElem]:
        return [self.generator(i) for i in range(self.rank)]

    def element(self, comps: Sequence[Poly]) -> FreeElem:
        y = FreeElem(comps)
        if y.rank != self.rank:
            raise RingMismatch("element has the wrong rank")
        return y

    def ideal(self) -> Ideal | None:
        """For a cyclic presentation, the ideal ``J`` with ``M = B/J``."""
        if self.rank != 1:
            return None
        return Ideal(self.ring, self.nvars, [r[0] for r in self.relations])

    # cached algebra
    def annihilator(self, i: int) -> Ideal:
        """``Ann(e_i)`` with a cached basis."""
        with self._lock:
            J = self._ann.get(i)
        if J is None:
            J = element_annihilator(self, self.generator(i))
            with self._lock:
                J = self._ann.setdefault(i, J)
        return J

    def annihilators(self) -> list[Ideal]:
        return [self.annihilator(i) for i in range(self.rank)]

    def relation_basis(self):
        with self._lock:
            G = self._gb
        if G is None:
            # term-over-position: position-first orders blow up on wide presentations
            G = buchberger(self.relations, GREVLEX, ring=self.ring, nvars=self.nvars, rank=self.rank,
                           module_order="top")
            with self._lock:
                self._gb = G
        return G

    def is_zero_element(self, y: FreeElem) -> bool:
        y = self.element(y.components) if isinstance(y, FreeElem) else self.element(y)
        return normal_form(y, self.relation_basis()).is_zero()

    def is_zero_module(self) -> bool:
        return all(self.is_zero_element(g) for g in self.generators())

    def rewrite(self, phi: VarChange) -> "ModulePresentation":
        """The same module with relations rewritten in ``phi``'s new coordinates."""
        if phi.nvars != self.nvars:
            raise RingMismatch("change of variables has the wrong arity")
        return ModulePresentation(self.ring, self.nvars, self.rank,
                                  [r.map(phi.apply) for r in self.relations], self.names)

    def map_coeffs(self, fn, ring) -> "ModulePresentation":
        return ModulePresentation(ring, self.nvars, self.rank,
                                  [r.map(lambda p: p.map_coeffs(fn, ring)) for r in self.relations],
                                  self.names)

    def to_dict(self, names="x") -> dict:
        return {
            "ring": self.ring.descriptor(),
            "nvars": self.nvars,
            "rank": self.rank,
            "relations": [[c.format(names) for c in r] for r in self.relations],
        }

    def __repr__(self):
        rels = "; ".join(r.format() if self.rank > 1 else str(r[0]) for r in self.relations)
        return f"ModulePresentation({self.ring.descriptor()}, n={self.nvars}, rank={self.rank}, [{rels}])"


# -- torsion -------------------------------------------------------------------

def is_torsion_element(P: ModulePresentation, y: FreeElem, k: int) -> bool:
    """Some nonzero ``d`` in ``D[x1..xk]`` kills ``y``; for ``k = 0`` iff ``y = 0``."""
    if not 0 <= k <= P.nvars:
        raise ValueError(f"subring index {k} outside 0..{P.nvars}")
    ann = element_annihilator(P, y)
    return _ann_torsion(ann, k)


def _in_prefix(exps: tuple, k: int) -> bool:
    return not any(exps[k:])


def _ann_torsion(ann: Ideal, k: int, certificates: Sequence[Poly] = ()) -> bool:
    """Whether ``ann ∩ D[x1..xk] != 0``.

    Exact shortcuts before the block-order elimination: every nonzero
    element of the intersection has its leading monomial in ``x1..xk`` under
    any order, so a basis with no such leading monomial proves the
    intersection is zero; a basis element or certificate in ``D[x1..xk]``
    lying in ``ann`` proves it is not.
    """
    if ann.is_zero():
        return False
    if k == ann.nvars:
        return True
    G = ann.groebner()
    if not any(_in_prefix(m[1:], k) for m in G.leading_monomials()):
        return False
    if any(all(_in_prefix(e, k) for e in g.terms) for g in G.elements):
        return True
    for d in certificates:
        if not d.is_zero() and all(_in_prefix(e, k) for e in d.terms) and ann.contains(d):
            return True
    return not eliminate(ann, k).is_zero()


def is_torsion_module(P: ModulePresentation, k: int, certificates: Sequence[Poly] = ()) -> bool:
    """Every generator class is torsion over ``D[x1..xk]``.

    ``certificates`` are optional candidate elements of ``D[x1..xk]``; they
    only short-cut the test when they verifiably kill a generator.
    """
    if not 0 <= k <= P.nvars:
        raise ValueError(f"subring index {k} outside 0..{P.nvars}")
    return all(_ann_torsion(P.annihilator(i), k, certificates) for i in range(P.rank))


@dataclass(frozen=True)
class TorsionProfile:
    """Torsion flags over ``D[x1..xk]`` for ``k = 0..n`` (True = torsion)."""

    flags: tuple[bool, ...]

    def __post_init__(self):
        f = self.flags
        for k in range(len(f) - 1):
            if f[k] and not f[k + 1]:
                raise AssertionError(f"torsion profile not monotone: {f}")

    @property
    def nvars(self) -> int:
        return len(self.flags) - 1

    @property
    def threshold(self) -> int:
        """Least ``k`` with a torsion flag, ``n + 1`` if none."""
        for k, t in enumerate(self.flags):
            if t:
                return k
        return len(self.flags)

    @property
    def m_profile(self) -> int:
        return self.threshold - 1

    def summary(self) -> str:
        return ", ".join(f"k={k} {'torsion' if t else 'non-torsion'}" for k, t in enumerate(self.flags))

    def to_dict(self) -> dict:
        return {
            "flags": ["torsion" if t else "non-torsion" for t in self.flags],
            "threshold": self.threshold,
            "m_profile": self.m_profile,
        }


def torsion_profile(P: ModulePresentation, certificates: Sequence[Poly] = ()) -> TorsionProfile:
    """Flags for ``k = 0..n``, each decided independently (see :func:`is_torsion_module`)."""
    if P.is_zero_module():
        raise ZeroModule("the zero module has no torsion profile")
    return TorsionProfile(tuple(is_torsion_module(P, k, certificates) for k in range(P.nvars + 1)))


def annihilator_factors(P: ModulePresentation, cost: Callable[[Poly], object] | None = None) -> list[Poly]:
    """One nonzero element of ``Ann(e_i)`` per generator (``1`` for zero classes).

    Each is the reduced-basis element minimizing ``cost`` (default: total
    degree, then term count).
    """
    if cost is None:
        cost = lambda f: (f.total_degree(), len(f))
    out = []
    for ann in P.annihilators():
        if ann.is_zero():
            raise NotTorsion("a generator has zero annihilator")
        G = ann.groebner()
        if G.is_unit():
            out.append(Poly.const(P.ring, P.nvars, 1))
        else:
            out.append(min(G.elements, key=cost))
    return out


def module_annihilator_witness(P: ModulePresentation, cost: Callable[[Poly], object] | None = None) -> Poly:
    """A nonzero ``f`` with ``f * M = 0``: the product of :func:`annihilator_factors`."""
    w = Poly.const(P.ring, P.nvars, 1)
    for a in annihilator_factors(P, cost):
        w = w * a
    return w


def greedy_witness(P: ModulePresentation, cost: Callable[[Poly], object] | None = None) -> Poly:
    """Like :func:`module_annihilator_witness`, skipping generators the partial product already kills."""
    if cost is None:
        cost = lambda f: (f.total_degree(), len(f))
    anns = P.annihilators()
    if any(a.is_zero() for a in anns):
        raise NotTorsion("a generator has zero annihilator")
    w = Poly.const(P.ring, P.nvars, 1)
    for ann in anns:
        G = ann.groebner()
        if G.is_unit() or normal_form(w, G).is_zero():
            continue
        w = min((w * c for c in G.elements), key=cost)
    return w


# -- descent -------------------------------------------------------------------

def _reduce_parts(parts: list[Poly], g_low: list[Poly], e: int, zero: Poly) -> list[Poly]:
    """Reduce a last-variable coefficient list modulo a monic ``t^e + sum g_low[l] t^l``."""
    parts = list(parts)
    for top in range(len(parts) - 1, e - 1, -1):
        c = parts[top]
        if c.is_zero():
            continue
        parts[top] = zero
        base = top - e
        for l in range(e):
            if not g_low[l].is_zero():
                parts[base + l] = parts[base + l] - c * g_low[l]
    parts = parts[:e] + [zero] * max(0, e - len(parts))
    return parts


def _monic_low(g: Poly, ring) -> list[Poly]:
    """Lower last-variable coefficients of ``g`` scaled to a leading 1."""
    if g.is_zero() or not is_monic_in_last(g):
        raise NotMonic("witness is not monic in the last variable")
    parts = g.coeffs_in_last()
    inv = ring.inv(parts[-1].constant_term())
    return [c.scale(inv) for c in parts[:-1]]


def descend(P: ModulePresentation, phi: VarChange, g: Poly | Sequence[Poly]) -> ModulePresentation:
    """Present ``M`` over ``D[t1..t_{n-1}]`` after rewriting through ``phi``.

    ``g`` (in the new coordinates) is either one polynomial killing ``M`` or
    one polynomial per generator killing that generator; each must be monic
    in ``t_n``.  A single ``g`` needs degree ``e >= 1``; per-generator factors
    may be the constant 1 for generators that are zero in ``M``.

    Generators of the result are ``e_i * t_n^j`` for ``j < e_i``.  Relations
    are ``t_n^j * rho`` reduced modulo the factors, for every relation ``rho``
    and every ``j`` below the degree of the product of the distinct factors
    (multiplication by ``t_n`` satisfies that monic polynomial, so higher
    powers add nothing new).
    """
    n, k, R = P.nvars, P.rank, P.ring
    if n < 1:
        raise ValueError("nothing to descend over zero variables")
    single = isinstance(g, Poly)
    gs = [g] * k if single else list(g)
    if len(gs) != k:
        raise RingMismatch("need one factor per generator")
    if phi.nvars != n or any(h.nvars != n for h in gs):
        raise RingMismatch("change of variables / witness arity mismatch")
    lows = [_monic_low(h, R) for h in gs]
    degs = [len(lo) for lo in lows]
    if single and degs[0] < 1:
        raise NotMonic("witness has degree 0 in the last variable")
    distinct = {}
    for h, lo in zip(gs, lows):
        distinct.setdefault(h.scale(R.inv(h.coeffs_in_last()[-1].constant_term())), len(lo))
    steps = sum(distinct.values())
    zero = Poly.zero(R, n - 1)
    total = sum(degs)
    if total == 0:
        return ModulePresentation.zero_module(R, n - 1)
    budget = get_limits().max_presentation
    used = 0
    rels = []
    for rho in P.rewrite(phi).relations:
        cur = [_reduce_parts(c.coeffs_in_last(), lows[i], degs[i], zero) if not c.is_zero() else [zero] * degs[i]
               for i, c in enumerate(rho.components)]
        for j in range(steps):
            if j:
                cur = [_reduce_parts([zero] + v, lows[i], degs[i], zero) for i, v in enumerate(cur)]
            row = FreeElem([cur[i][l] for i in range(k) for l in range(degs[i])])
            used += sum(len(c) for c in row)
            if used > budget:
                raise ResourceLimit(f"descended presentation exceeds {budget} terms")
            rels.append(row)
    names = [f"{P.names[i]}*t{n}^{l}" if l else P.names[i] for i in range(k) for l in range(degs[i])]
    return ModulePresentation(R, n - 1, total, rels, names)


def _unit_constant(c: Poly, R) -> bool:
    return c.is_constant() and not c.is_zero() and R.is_unit(c.constant_term())


def _check_bits(f: Poly, max_bits: int) -> None:
    for v in f.terms.values():
        num = getattr(v, "numerator", None)
        if num is not None and max(num.bit_length(), v.denominator.bit_length()) > max_bits:
            raise ResourceLimit("coefficient size exceeds the bit ceiling")


def prune(P: ModulePresentation) -> ModulePresentation:
    """Drop generators that a relation expresses through the others.

    A relation with a unit constant entry at ``e_a`` lets ``e_a`` be
    eliminated (a Tietze move); repeat until no such entry remains.  Pivots
    are chosen by smallest fill-in estimate, ties by position.  The result
    presents an isomorphic module; the zero module comes back as ``B/<1>``.
    """
    R = P.ring
    max_bits = get_limits().max_coeff_bits
    rows: dict[int, dict[int, Poly]] = {}
    cols: dict[int, set[int]] = {a: set() for a in range(P.rank)}
    for ri, r in enumerate(P.relations):
        row = {a: c for a, c in enumerate(r.components) if not c.is_zero()}
        rows[ri] = row
        for a in row:
            cols[a].add(ri)
    alive = set(range(P.rank))
    while True:
        best = None
        for ri, row in rows.items():
            for a, c in row.items():
                if _unit_constant(c, R):
                    score = ((len(row) - 1) * (len(cols[a]) - 1), ri, a)
                    if best is None or score < best:
                        best = score
        if best is None:
            break
        _, pi, a = best
        rho = rows.pop(pi)
        for b in rho:
            cols[b].discard(pi)
        inv = R.inv(rho[a].constant_term())
        for ri in sorted(cols[a]):
            row = rows[ri]
            q = row[a].scale(inv)
            for b, y in rho.items():
                v = row.get(b)
                v = -(q * y) if v is None else v - q * y
                if v.is_zero():
                    row.pop(b, None)
                    cols[b].discard(ri)
                else:
                    _check_bits(v, max_bits)
                    row[b] = v
                    cols[b].add(ri)
            if not row:
                del rows[ri]
        cols.pop(a)
        alive.discard(a)
        if not alive:
            return ModulePresentation.zero_module(R, P.nvars)
    keep = sorted(alive)
    zero = Poly.zero(R, P.nvars)
    seen = set()
    out = []
    for ri in sorted(rows):
        row = FreeElem([rows[ri].get(a, zero) for a in keep])
        if row not in seen:
            seen.add(row)
            out.append(row)
    return ModulePresentation(R, P.nvars, len(keep), out, [P.names[a] for a in keep])
