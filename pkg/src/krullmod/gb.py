"""Groebner bases for ideals and submodules of free modules over a field.

One Buchberger engine serves both cases: an ideal is a rank-1 submodule.
Module terms are ``(position, e1, ..., en)`` tuples compared
position-over-term (position 0 largest), so a basis under an order with a
trailing "tag" position eliminates all other positions.  Pair handling uses
the Gebauer-Moeller update (product criterion only in rank 1, where it is
valid) and the normal selection strategy.

The module also hosts the computations built on bases: normal forms,
elimination, colon ideals, element annihilators and the combinatorial
dimension of a leading-term ideal.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import operator
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .coeff import CoeffRing, PrimeField
from .config import get_limits
from .errors import RingMismatch, ResourceLimit, UnsupportedRing, ZeroPolynomial
from .poly import GREVLEX, MINUS_INFINITY, Block, MonomialOrder, Poly, exact_divide

log = logging.getLogger(__name__)

_add = operator.add
_ge = operator.ge


# -- free-module elements ----------------------------------------------------

class FreeElem:
    """An element of the free module ``B^k`` (tuple of component polynomials)."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Poly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a free-module element needs at least one component")
        ring, n = comps[0].ring, comps[0].nvars
        for c in comps:
            if c.ring != ring or c.nvars != n:
                raise RingMismatch("free-module components must share ring and arity")
        self.components = comps

    @classmethod
    def basis(cls, ring, nvars, rank, i):
        """The ``i``-th standard basis vector (0-based)."""
        return cls([Poly.const(ring, nvars, 1 if j == i else 0) for j in range(rank)])

    @classmethod
    def zero(cls, ring, nvars, rank):
        return cls([Poly.zero(ring, nvars)] * rank)

    @property
    def ring(self):
        return self.components[0].ring

    @property
    def nvars(self):
        return self.components[0].nvars

    @property
    def rank(self):
        return len(self.components)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def _check(self, other):
        if not isinstance(other, FreeElem) or other.rank != self.rank:
            raise RingMismatch("free-module elements of different rank")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FreeElem([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        other = self._check(other)
        return FreeElem([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return FreeElem([-a for a in self.components])

    def __rmul__(self, f):
        if isinstance(f, Poly):
            return FreeElem([f * a for a in self.components])
        return FreeElem([a * f for a in self.components])

    __mul__ = __rmul__

    def __eq__(self, other):
        return isinstance(other, FreeElem) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def map(self, fn) -> "FreeElem":
        return FreeElem([fn(c) for c in self.components])

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def format(self, names="x"):
        return "(" + ", ".join(c.format(names) for c in self.components) + ")"

    __str__ = format

    def __repr__(self):
        return f"FreeElem{self.format()}"


def _to_vec(f) -> dict:
    if isinstance(f, Poly):
        return {(0,) + e: c for e, c in f.terms.items()}
    out = {}
    for pos, comp in enumerate(f.components):
        for e, c in comp.terms.items():
            out[(pos,) + e] = c
    return out


def _from_vec(vec: dict, ring, nvars, rank):
    if rank == 1:
        return Poly(ring, nvars, {m[1:]: c for m, c in vec.items()}, normalized=True)
    parts: list[dict] = [{} for _ in range(rank)]
    for m, c in vec.items():
        parts[m[0]][m[1:]] = c
    return FreeElem([Poly(ring, nvars, p, normalized=True) for p in parts])


# -- the engine ----------------------------------------------------------------

class _Elem:
    __slots__ = ("lead", "lkey", "tail", "vec")

    def __init__(self, vec: dict, nk):
        items = sorted(((nk(m), m, c) for m, c in vec.items()))
        self.lkey, self.lead, _ = items[0]
        self.tail = [(m, k, c) for k, m, c in items[1:]]
        self.vec = vec


def _lcm(a, b):
    return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))


def _divides(a, b):
    """Monomial ``a`` divides ``b`` (same position)."""
    return a[0] == b[0] and all(map(operator.le, a[1:], b[1:]))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a[1:], b[1:]))


def _module_nkey(order: MonomialOrder, rank: int, module_order: str = "pot"):
    """Heap key on ``(position,) + exponents`` (smaller means greater).

    ``"pot"``: position first, position 0 largest.  ``"top"``: monomial first,
    position breaks ties.  ``"tag"``: like ``"top"`` on positions
    ``0..rank-2`` with the last position below every other term, so basis
    elements led by it have all other components zero.
    """
    onk = order.nkey
    if module_order == "pot" or rank == 1:
        return lambda m: (m[0],) + onk(m[1:])
    if module_order == "top":
        return lambda m: onk(m[1:]) + (m[0],)
    if module_order == "tag":
        last = rank - 1
        return lambda m: (m[0] == last,) + onk(m[1:]) + (m[0],)
    raise ValueError(f"unknown module order {module_order!r}")


class _Engine:
    def __init__(self, ring: CoeffRing, nvars: int, order: MonomialOrder, rank: int,
                 module_order: str = "pot"):
        if not ring.is_field:
            raise UnsupportedRing(f"Groebner bases need a field, not {ring.descriptor()}")
        self.ring = ring
        self.nvars = nvars
        self.order = order
        self.rank = rank
        self.p = ring.p if isinstance(ring, PrimeField) else None
        self.nk = _module_nkey(order, rank, module_order)
        self.reducers: list[_Elem] = []
        lim = get_limits()
        self.max_terms = lim.max_terms
        self.max_pairs = lim.max_pairs
        self.max_bits = lim.max_coeff_bits

    def _check(self, vec):
        if len(vec) > self.max_terms:
            raise ResourceLimit(f"basis element with {len(vec)} terms exceeds the term ceiling")
        if self.p is None:
            for c in vec.values():
                if max(c.numerator.bit_length(), c.denominator.bit_length()) > self.max_bits:
                    raise ResourceLimit("coefficient size exceeds the bit ceiling")

    def _pair_key(self, l):
        # smallest lcm first: total degree, then the monomial order
        return (sum(l) - l[0], self.order.key(l[1:]), l[0])

    def divisor(self, m):
        pos = m[0]
        for g in self.reducers:
            lm = g.lead
            if lm[0] == pos and all(map(_ge, m, lm)):
                return g
        return None

    def reduce(self, vec: dict, full: bool = True, reducers=None) -> dict:
        if reducers is not None:
            saved, self.reducers = self.reducers, reducers
        try:
            return self._reduce(vec, full)
        finally:
            if reducers is not None:
                self.reducers = saved

    def _reduce(self, vec: dict, full: bool) -> dict:
        nk, p = self.nk, self.p
        acc = dict(vec)
        heap = [(nk(m), m) for m in acc]
        heapq.heapify(heap)
        pop, push = heapq.heappop, heapq.heappush
        rem = {}
        steps = 0
        while heap:
            _, m = pop(heap)
            c = acc.pop(m)
            if c == 0:
                continue
            g = self.divisor(m)
            if g is None:
                rem[m] = c
                if not full:
                    for _, m2 in heap:
                        v = acc[m2]
                        if v != 0:
                            rem[m2] = v
                    return rem
                continue
            steps += 1
            shift = (0,) + tuple(a - b for a, b in zip(m[1:], g.lead[1:]))
            skey = nk(shift)
            if p is None:
                for gm, gk, gc in g.tail:
                    nm = tuple(map(_add, gm, shift))
                    v = acc.get(nm)
                    if v is None:
                        acc[nm] = -c * gc
                        push(heap, (tuple(map(_add, gk, skey)), nm))
                    else:
                        acc[nm] = v - c * gc
            else:
                for gm, gk, gc in g.tail:
                    nm = tuple(map(_add, gm, shift))
                    v = acc.get(nm)
                    if v is None:
                        acc[nm] = (-c * gc) % p
                        push(heap, (tuple(map(_add, gk, skey)), nm))
                    else:
                        acc[nm] = (v - c * gc) % p
            if len(acc) > self.max_terms:
                raise ResourceLimit("intermediate reduction exceeds the term ceiling")
        return rem

    def monic(self, vec: dict) -> dict:
        lead = min(vec, key=self.nk)
        c = vec[lead]
        if c == 1:
            return vec
        inv = self.ring.inv(c)
        if self.p is None:
            return {m: v * inv for m, v in vec.items()}
        p = self.p
        return {m: v * inv % p for m, v in vec.items()}

    def spoly(self, f: _Elem, g: _Elem) -> dict:
        l = _lcm(f.lead, g.lead)
        out = {}
        p = self.p
        for elem, sign in ((f, 1), (g, -1)):
            shift = (0,) + tuple(a - b for a, b in zip(l[1:], elem.lead[1:]))
            for gm, _, gc in elem.tail:
                nm = tuple(map(_add, gm, shift))
                v = out.get(nm, 0) + (gc if sign > 0 else -gc)
                out[nm] = v % p if p else v
        return {m: c for m, c in out.items() if c != 0}

    def groebner(self, gens: Iterable[dict]) -> list[dict]:
        elems: list[_Elem] = []
        G: list[int] = []
        pairs: list = []
        counter = itertools.count()
        product_ok = self.rank == 1

        def update(hi):
            nonlocal pairs, G
            h = elems[hi]
            C = [(gi, _lcm(h.lead, elems[gi].lead)) for gi in G if elems[gi].lead[0] == h.lead[0]]
            D = []
            while C:
                g1, l1 = C.pop(0)
                if (product_ok and _coprime(h.lead, elems[g1].lead)) or \
                        not any(_divides(l2, l1) for _, l2 in itertools.chain(C, D)):
                    D.append((g1, l1))
            E = [(g, l) for g, l in D if not (product_ok and _coprime(h.lead, elems[g].lead))]
            kept = []
            for entry in pairs:
                _, _, i, j, l = entry
                if _divides(h.lead, l) and _lcm(elems[i].lead, h.lead) != l \
                        and _lcm(elems[j].lead, h.lead) != l:
                    continue
                kept.append(entry)
            for g, l in E:
                kept.append((self._pair_key(l), next(counter), g, hi, l))
            heapq.heapify(kept)
            pairs = kept
            G = [g for g in G if not _divides(h.lead, elems[g].lead)] + [hi]
            self.reducers = [elems[g] for g in G]

        for vec in gens:
            if not vec:
                continue
            r = self.reduce(vec)
            if r:
                r = self.monic(r)
                self._check(r)
                elems.append(_Elem(r, self.nk))
                update(len(elems) - 1)

        processed = 0
        while pairs:
            _, _, i, j, _ = heapq.heappop(pairs)
            processed += 1
            if processed > self.max_pairs:
                raise ResourceLimit(f"more than {self.max_pairs} critical pairs")
            s = self.spoly(elems[i], elems[j])
            if not s:
                continue
            r = self.reduce(s)
            if r:
                r = self.monic(r)
                self._check(r)
                elems.append(_Elem(r, self.nk))
                update(len(elems) - 1)

        # interreduce the minimal basis
        basis = [elems[g] for g in G]
        out = []
        for k, g in enumerate(basis):
            others = basis[:k] + basis[k + 1:]
            tail = {m: c for m, _, c in g.tail}
            tail = self.reduce(tail, reducers=others) if tail else {}
            vec = dict(tail)
            vec[g.lead] = self.ring.one()
            out.append(vec)
        out.sort(key=lambda v: min(self.nk(m) for m in v))
        return out


# -- public API ------------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis; ``elements`` are monic and interreduced."""

    order: MonomialOrder
    ring: CoeffRing
    nvars: int
    rank: int
    elements: tuple
    _vecs: tuple = field(repr=False, compare=False, default=())
    module_order: str = "pot"

    def leading_monomials(self) -> list[tuple]:
        """Leading ``(position, exponents)`` pairs (position 0 for ideals)."""
        nk = _module_nkey(self.order, self.rank, self.module_order)
        return [min(v, key=nk) for v in self._vecs]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_unit(self) -> bool:
        return self.rank == 1 and any(e.is_constant() and not e.is_zero() for e in self.elements)


def _field_check(ring):
    if not ring.is_field:
        raise UnsupportedRing(f"Groebner bases need a field, not {ring.descriptor()}")


def _shape(gens) -> tuple:
    gens = list(gens)
    if not gens:
        return None, None, None
    g0 = gens[0]
    if isinstance(g0, Poly):
        return g0.ring, g0.nvars, 1
    return g0.ring, g0.nvars, g0.rank


def buchberger(gens: Sequence, order: MonomialOrder = GREVLEX, *, ring=None, nvars=None,
               rank=None, module_order: str = "pot") -> GroebnerBasis:
    """Reduced Groebner basis of the ideal (Polys) or submodule (FreeElems) spanned by ``gens``.

    For an empty generator list the ring data must be passed explicitly.
    ``module_order`` picks how positions combine with ``order`` (see
    :func:`_module_nkey`).
    """
    gens = list(gens)
    r0, n0, k0 = _shape(gens)
    ring = ring or r0
    nvars = n0 if nvars is None else nvars
    rank = k0 if rank is None else rank
    if ring is None:
        raise ValueError("ring data required for an empty generator list")
    _field_check(ring)
    for g in gens:
        gr, gn, gk = _shape([g])
        if gr != ring or gn != nvars or gk != rank:
            raise RingMismatch("generators must share ring, arity and rank")
    eng = _Engine(ring, nvars, order, rank, module_order)
    vecs = eng.groebner(_to_vec(g) for g in gens)
    elems = tuple(_from_vec(v, ring, nvars, rank) for v in vecs)
    if log.isEnabledFor(logging.DEBUG):
        log.debug("basis: %d generators -> %d elements (%s, rank %s, %s)",
                  len(gens), len(elems), order, rank, module_order)
        for i, g in enumerate(elems):
            log.debug("  g%d = %s", i + 1, g.format())
    return GroebnerBasis(order, ring, nvars, rank, elems, tuple(vecs), module_order)


def normal_form(f, G: GroebnerBasis):
    """Unique remainder of ``f`` (Poly or FreeElem) modulo ``G``."""
    if f.ring != G.ring or f.nvars != G.nvars:
        raise RingMismatch("element and basis live in different rings")
    eng = _Engine(G.ring, G.nvars, G.order, G.rank, G.module_order)
    eng.reducers = [_Elem(v, eng.nk) for v in G._vecs]
    r = eng.reduce(_to_vec(f))
    return _from_vec(r, G.ring, G.nvars, G.rank)


class Ideal:
    """An ideal of ``ring[x1..xn]`` given by generators, with cached bases per order."""

    def __init__(self, ring: CoeffRing, nvars: int, gens: Iterable[Poly] = ()):
        self.ring = ring
        self.nvars = nvars
        gs = []
        for g in gens:
            if g.ring != ring or g.nvars != nvars:
                raise RingMismatch("ideal generator in the wrong ring")
            if not g.is_zero():
                gs.append(g)
        self.gens: tuple[Poly, ...] = tuple(gs)
        self._cache: dict[MonomialOrder, GroebnerBasis] = {}
        self._lock = threading.Lock()

    @classmethod
    def of(cls, *gens: Poly) -> "Ideal":
        if not gens:
            raise ValueError("use Ideal(ring, nvars) for the zero ideal")
        return cls(gens[0].ring, gens[0].nvars, gens)

    def groebner(self, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
        with self._lock:
            G = self._cache.get(order)
        if G is None:
            G = buchberger(self.gens, order, ring=self.ring, nvars=self.nvars, rank=1)
            with self._lock:
                G = self._cache.setdefault(order, G)
        return G

    def _seed(self, G: GroebnerBasis):
        with self._lock:
            self._cache.setdefault(G.order, G)

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self.groebner()).is_zero()

    __contains__ = contains

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def equals(self, other: "Ideal") -> bool:
        return self.issubset(other) and other.issubset(self)

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.gens)) or '0'}>"


def eliminate(J: Ideal, m: int) -> Ideal:
    """``J`` intersected with ``D[x1..xm]``, as an ideal in ``m`` variables.

    Computed from a basis under ``Block(m)``; for ``m = 0`` this is the zero
    ideal or the unit ideal of the coefficient field.
    """
    n = J.nvars
    if not 0 <= m <= n:
        raise ValueError(f"elimination index {m} outside 0..{n}")
    if m == n:
        out = Ideal(J.ring, n, J.gens)
        return out
    G = J.groebner(Block(m))
    keep = [g.truncate_vars(m) for g in G.elements if not any(any(e[m:]) for e in g.terms)]
    out = Ideal(J.ring, m, keep)
    # a subset of a Block(m) basis is a reduced basis of the intersection
    out._seed(GroebnerBasis(GREVLEX, J.ring, m, 1, tuple(keep), tuple(_to_vec(k) for k in keep)))
    return out


def colon_element(J: Ideal, g: Poly) -> Ideal:
    """``(J : g) = {h : h*g in J}`` via ``J ∩ <g>`` and exact division by ``g``."""
    if g.is_zero():
        raise ZeroPolynomial("colon by the zero polynomial")
    n, R = J.nvars, J.ring
    if J.is_zero():
        return Ideal(R, n)
    w = Poly.var(R, n + 1, n + 1)
    gens = [w * f.embed(n + 1) for f in J.gens] + [(Poly.const(R, n + 1, 1) - w) * g.embed(n + 1)]
    inter = eliminate(Ideal(R, n + 1, gens), n)
    return Ideal(R, n, [exact_divide(f, g) for f in inter.gens])


def annihilator(relations: Sequence[FreeElem], y, *, order: MonomialOrder = GREVLEX) -> Ideal:
    """``{h : h*y in span(relations)}`` through the tag-component construction."""
    if isinstance(y, Poly):
        y = FreeElem([y])
    R, n, k = y.ring, y.nvars, y.rank
    _field_check(R)
    zero = Poly.zero(R, n)
    one = Poly.const(R, n, 1)
    gens = [FreeElem(tuple(r.components) + (zero,)) for r in relations]
    gens.append(FreeElem(tuple(y.components) + (one,)))
    G = buchberger(gens, order, ring=R, nvars=n, rank=k + 1, module_order="tag")
    nk = _module_nkey(order, k + 1, "tag")
    tagged = [v for v in G._vecs if min(v, key=nk)[0] == k]
    polys = [Poly(R, n, {m[1:]: c for m, c in v.items()}, normalized=True) for v in tagged]
    out = Ideal(R, n, polys)
    out._seed(GroebnerBasis(order, R, n, 1, tuple(polys), tuple({(0,) + m[1:]: c for m, c in v.items()}
                                                                   for v in tagged)))
    return out


def element_annihilator(P, y) -> Ideal:
    """Annihilator of the class of ``y`` in the module presented by ``P``."""
    if isinstance(y, Poly):
        y = FreeElem([y])
    if y.rank != P.rank or y.nvars != P.nvars or y.ring != P.ring:
        raise RingMismatch("element does not live in the presentation's free module")
    return annihilator(P.relations, y)


def lt_dimension(J: Ideal, order: MonomialOrder = GREVLEX):
    """``dim B/J`` from the leading monomials of a basis of ``J``.

    The largest set of variables containing the support of no leading
    monomial.  ``MINUS_INFINITY`` for the unit ideal, ``n`` for the zero ideal.
    """
    if J.is_zero():
        _check_independent_sets(J.nvars)
        return J.nvars
    G = J.groebner(order)
    return monomial_dimension([lead[1:] for lead in G.leading_monomials()], J.nvars)


def _check_independent_sets(n: int) -> None:
    if n > 16:
        raise ResourceLimit("independent-set enumeration is capped at 16 variables")


def monomial_dimension(leads: Sequence[tuple], n: int):
    """``dim B/<x^a : a in leads>``; ``MINUS_INFINITY`` if some lead is 1."""
    _check_independent_sets(n)
    masks = {sum(1 << i for i, a in enumerate(e) if a) for e in leads}
    if 0 in masks:
        return MINUS_INFINITY
    # keep minimal supports only
    masks = [a for a in masks if not any(b != a and (b & a) == b for b in masks)]
    best = 0
    for S in range(1 << n):
        size = bin(S).count("1")
        if size <= best:
            continue
        if all((a & S) != a for a in masks):
            best = size
    return best
