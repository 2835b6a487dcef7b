"""Sparse multivariate polynomials over a :class:`~krullmod.coeff.CoeffRing`.

A :class:`Poly` maps exponent tuples to raw (nonzero) ring values.  Variables
are positional: ``x1 .. xn`` in text, index ``0 .. n-1`` in exponent tuples.
Display prefixes such as ``t`` or ``z`` are presentation only; the parser
accepts any alphabetic prefix followed by an index.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeff import Coeff, CoeffRing, DualNumbers, PrimeField, ProductField, Rationals
from .config import get_limits
from .errors import ParseError, ResourceLimit, RingMismatch, ZeroPolynomial

MINUS_INFINITY = float("-inf")

_add = operator.add


# -- monomial orders ---------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """A global monomial order.

    ``kind`` is ``"lex"`` (x1 > x2 > ...), ``"grevlex"`` or ``"block"``.  A
    block order with ``split=m`` lets ``x_{m+1}..x_n`` dominate ``x_1..x_m``
    (grevlex inside each block), so a Groebner basis under it eliminates the
    trailing variables.
    """

    kind: str
    split: int | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if (self.kind == "block") != (self.split is not None):
            raise ValueError("block orders (and only they) need a split")

    def nkey(self, e: tuple) -> tuple:
        """Sort key with *smaller* meaning *greater* monomial (heap friendly)."""
        if self.kind == "lex":
            return tuple(-a for a in e)
        if self.kind == "grevlex":
            return (-sum(e),) + e[::-1]
        m = self.split
        hi, lo = e[m:], e[:m]
        return (-sum(hi),) + hi[::-1] + (-sum(lo),) + lo[::-1]

    def key(self, e: tuple) -> tuple:
        """Sort key with larger meaning greater monomial."""
        return tuple(-a for a in self.nkey(e))

    def __str__(self):
        return self.kind if self.split is None else f"block({self.split})"


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def Lex() -> MonomialOrder:
    return LEX


def GrevLex() -> MonomialOrder:
    return GREVLEX


def Block(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


def parse_order(name: str, nvars: int | None = None) -> MonomialOrder:
    name = name.strip().lower()
    if name == "lex":
        return LEX
    if name == "grevlex":
        return GREVLEX
    mt = re.fullmatch(r"block\((\d+)\)", name)
    if mt:
        return Block(int(mt.group(1)))
    raise ValueError(f"unknown monomial order {name!r}")


# -- polynomials -------------------------------------------------------------

def _check_size(n: int) -> None:
    lim = get_limits().max_terms
    if n > lim:
        raise ResourceLimit(f"polynomial with {n} terms exceeds the {lim}-term ceiling")


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to raw values."""

    __slots__ = ("ring", "nvars", "terms", "_hash")

    def __init__(self, ring: CoeffRing, nvars: int, terms: Mapping | None = None, *, normalized=False):
        self.ring = ring
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif normalized:
            self.terms = dict(terms)
        else:
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise RingMismatch(f"exponent {e} does not have {nvars} entries")
                if any(a < 0 for a in e):
                    raise ValueError(f"negative exponent in {e}")
                if isinstance(c, Coeff):
                    c = ring(c).value
                elif isinstance(c, (int, Fraction)) and not isinstance(c, bool):
                    c = ring(c).value
                else:
                    c = ring.normalize(c)
                if e in clean:
                    c = ring.add(clean[e], c)
                clean[e] = c
            self.terms = {e: c for e, c in clean.items() if not ring.is_zero(c)}
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, ring, nvars):
        return cls(ring, nvars, {}, normalized=True)

    @classmethod
    def const(cls, ring, nvars, c=1):
        v = ring(c).value
        if ring.is_zero(v):
            return cls.zero(ring, nvars)
        return cls(ring, nvars, {(0,) * nvars: v}, normalized=True)

    @classmethod
    def var(cls, ring, nvars, i: int):
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable x{i} outside 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(ring, nvars, {tuple(e): ring.one()}, normalized=True)

    @classmethod
    def monomial(cls, ring, nvars, exps, c=1):
        return cls(ring, nvars, {tuple(exps): c})

    @classmethod
    def gens(cls, ring, nvars):
        return [cls.var(ring, nvars, i) for i in range(1, nvars + 1)]

    # basic protocol
    def _like(self, terms):
        return Poly(self.ring, self.nvars, terms, normalized=True)

    def _compat(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring or other.nvars != self.nvars:
                raise RingMismatch(
                    f"{self.ring.descriptor()}[{self.nvars}] vs {other.ring.descriptor()}[{other.nvars}]"
                )
            return other
        if isinstance(other, (int, Fraction, Coeff)) and not isinstance(other, bool):
            return Poly.const(self.ring, self.nvars, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, Coeff)) and not isinstance(other, bool):
            return self == self._compat(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.nvars, frozenset(self.terms.items())))
        return self._hash

    # arithmetic
    def __add__(self, other):
        other = self._compat(other)
        R = self.ring
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                v = R.add(out[e], c)
                if R.is_zero(v):
                    del out[e]
                else:
                    out[e] = v
            else:
                out[e] = c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return self._like({e: R.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._compat(other))

    def __rsub__(self, other):
        return self._compat(other) - self

    def __mul__(self, other):
        other = self._compat(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.ring, self.nvars)
        R = self.ring
        acc: dict = {}
        get = acc.get
        if R.numeric:
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    e = tuple(map(_add, ea, eb))
                    acc[e] = get(e, 0) + ca * cb
            norm, isz = R.normalize, R.is_zero
            out = {}
            for e, c in acc.items():
                c = norm(c)
                if not isz(c):
                    out[e] = c
        else:
            zero = R.zero()
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    e = tuple(map(_add, ea, eb))
                    acc[e] = R.add(get(e, zero), R.mul(ca, cb))
            out = {e: c for e, c in acc.items() if not R.is_zero(c)}
        _check_size(len(out))
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = Poly.const(self.ring, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, c) -> "Poly":
        """Multiply by a scalar (raw value or anything the ring can coerce)."""
        R = self.ring
        v = R(c).value if isinstance(c, (int, Fraction, Coeff, str)) else c
        out = {}
        for e, a in self.terms.items():
            b = R.mul(a, v)
            if not R.is_zero(b):
                out[e] = b
        return self._like(out)

    def mul_monomial(self, exps: Sequence[int]) -> "Poly":
        exps = tuple(exps)
        return self._like({tuple(map(_add, e, exps)): c for e, c in self.terms.items()})

    # inspection
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.ring.zero())

    def leading(self, order: MonomialOrder):
        """Raw ``(exponents, value)`` of the leading term."""
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no leading term")
        e = min(self.terms, key=order.nkey)
        return e, self.terms[e]

    def leading_term(self, order: MonomialOrder) -> tuple[tuple, Coeff]:
        e, c = self.leading(order)
        return e, Coeff(self.ring, c)

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.nkey(t[0]))

    def degree_in(self, i: int):
        """Largest exponent of ``x_i`` (1-based); ``MINUS_INFINITY`` for zero."""
        if not self.terms:
            return MINUS_INFINITY
        return max(e[i - 1] for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def max_var_degree(self) -> int:
        if not self.terms:
            return 0
        return max(max(e, default=0) for e in self.terms)

    def support_vars(self) -> set[int]:
        """1-based indices of variables that occur."""
        out = set()
        for e in self.terms:
            out.update(i + 1 for i, a in enumerate(e) if a)
        return out

    def coeffs(self) -> dict[tuple, Coeff]:
        return {e: Coeff(self.ring, c) for e, c in self.terms.items()}

    def coefficient(self, exps) -> Coeff:
        return Coeff(self.ring, self.terms.get(tuple(exps), self.ring.zero()))

    # structure changes
    def embed(self, nvars: int) -> "Poly":
        """View in a ring with more variables (new ones appended)."""
        if nvars < self.nvars:
            raise RingMismatch("cannot embed into fewer variables")
        pad = (0,) * (nvars - self.nvars)
        return Poly(self.ring, nvars, {e + pad: c for e, c in self.terms.items()}, normalized=True)

    def truncate_vars(self, nvars: int) -> "Poly":
        """Drop trailing variables that do not occur."""
        if any(any(e[nvars:]) for e in self.terms):
            raise ValueError(f"polynomial involves variables beyond x{nvars}")
        return Poly(self.ring, nvars, {e[:nvars]: c for e, c in self.terms.items()}, normalized=True)

    def coeffs_in_last(self) -> list["Poly"]:
        """Coefficients with respect to the last variable, as polys in ``n-1`` vars."""
        if self.nvars == 0:
            raise ValueError("no variables")
        if not self.terms:
            return []
        deg = max(e[-1] for e in self.terms)
        parts: list[dict] = [{} for _ in range(deg + 1)]
        for e, c in self.terms.items():
            parts[e[-1]][e[:-1]] = c
        return [Poly(self.ring, self.nvars - 1, p, normalized=True) for p in parts]

    @classmethod
    def from_coeffs_in_last(cls, ring, nvars, parts: Sequence["Poly"]) -> "Poly":
        out = {}
        for k, p in enumerate(parts):
            for e, c in p.terms.items():
                out[e + (k,)] = c
        return cls(ring, nvars, out, normalized=True)

    def map_coeffs(self, fn, ring: CoeffRing) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not ring.is_zero(v):
                out[e] = v
        return Poly(ring, self.nvars, out, normalized=True)

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self.scale(self.ring.inv(c))

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        return substitute(self, images)

    def __call__(self, *images):
        return substitute(self, images)

    # text
    def format(self, names: str | Sequence[str] = "x") -> str:
        return format_poly(self, names)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self.ring.descriptor()}, {self.nvars}, {format_poly(self)!r})"


def substitute(f: Poly, images: Sequence[Poly]) -> Poly:
    """Replace ``x_i`` by ``images[i-1]`` and expand.

    The images must share one ring and arity; the result lives there.  Every
    intermediate size is checked against the active term ceiling.
    """
    images = list(images)
    if len(images) != f.nvars:
        raise RingMismatch(f"{len(images)} images for {f.nvars} variables")
    if not images:
        # no variables: f is a constant; target arity is unknowable, keep 0
        return f
    return Substitution(images)(f)


def _int_mul(a: dict, b: dict, mod: int) -> dict:
    acc: dict = {}
    get = acc.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(map(_add, ea, eb))
            acc[e] = get(e, 0) + ca * cb
    if mod:
        out = {}
        for e, c in acc.items():
            c %= mod
            if c:
                out[e] = c
    else:
        out = {e: c for e, c in acc.items() if c}
    _check_size(len(out))
    return out


_MONOMIAL_CACHE = 4096


class Substitution:
    """A reusable map ``x_i -> images[i-1]``; powers of the images are cached across calls.

    Over Q and F_p the expansion runs on integer coefficient maps.  Over Q each
    image is scaled to integer coefficients by the lcm of its denominators and
    the scale is divided back out once per result.
    """

    def __init__(self, images: Sequence[Poly]):
        self.images = list(images)
        if not self.images:
            raise RingMismatch("a substitution needs at least one image")
        ring, m = self.images[0].ring, self.images[0].nvars
        for g in self.images:
            if g.ring != ring or g.nvars != m:
                raise RingMismatch("substitution images must share ring and arity")
        self.ring, self.nvars = ring, m
        self.integral = isinstance(ring, (Rationals, PrimeField))
        self.mod = ring.p if isinstance(ring, PrimeField) else 0
        one = (0,) * m
        self._monomials: dict = {}
        if not self.integral:
            self._powers = [{0: Poly.const(ring, m, 1), 1: g} for g in self.images]
        elif self.mod:
            self._scale = [1] * len(self.images)
            self._powers = [{0: {one: 1}, 1: dict(g.terms)} for g in self.images]
        else:
            self._scale, self._powers = [], []
            for g in self.images:
                d = 1
                for c in g.terms.values():
                    d = d * c.denominator // math.gcd(d, c.denominator)
                self._scale.append(d)
                self._powers.append({0: {one: 1}, 1: {e: int(c * d) for e, c in g.terms.items()}})

    def _power(self, i: int, k: int):
        cache = self._powers[i]
        if k not in cache:
            half = self._power(i, k // 2)
            if self.integral:
                p = _int_mul(half, half, self.mod)
                cache[k] = _int_mul(p, cache[1], self.mod) if k % 2 else p
            else:
                p = half * half
                cache[k] = p * cache[1] if k % 2 else p
        return cache[k]

    def _monomial(self, e: tuple) -> dict:
        """Integer expansion of the image of ``x^e``, cached while the cache is small."""
        cache = self._monomials
        if e in cache:
            return cache[e]
        i = max((j for j, k in enumerate(e) if k), default=None)
        if i is None:
            return self._powers[0][0]
        p = self._power(i, e[i])
        if any(e[:i]):
            p = _int_mul(self._monomial(e[:i] + (0,) * (len(e) - i)), p, self.mod)
        if len(cache) < _MONOMIAL_CACHE:
            cache[e] = p
        return p

    def __call__(self, f: Poly) -> Poly:
        if f.nvars != len(self.images):
            raise RingMismatch(f"{len(self.images)} images for {f.nvars} variables")
        if f.ring != self.ring:
            raise RingMismatch("substitution images must be over the polynomial's ring")
        if self.integral:
            return self._call_int(f)
        R, acc = self.ring, {}
        for e, c in f.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    p = self._power(i, k)
                    term = p if term is None else term * p
            if term is None:
                term = self._powers[0][0]
            for te, tc in term.terms.items():
                v = R.mul(c, tc)
                acc[te] = R.add(acc[te], v) if te in acc else v
            _check_size(len(acc))
        return Poly(R, self.nvars, {e: c for e, c in acc.items() if not R.is_zero(c)}, normalized=True)

    def _call_int(self, f: Poly) -> Poly:
        mod, scale = self.mod, self._scale
        top = [max((e[i] for e in f.terms), default=0) for i in range(f.nvars)]
        # each term's weight once every image denominator is cleared to its top power
        weights, lcm = {}, 1
        for e, c in f.terms.items():
            if mod:
                weights[e] = c
                continue
            w = Fraction(c)
            for i, k in enumerate(e):
                if top[i] > k and scale[i] != 1:
                    w *= scale[i] ** (top[i] - k)
            weights[e] = w
            lcm = lcm * w.denominator // math.gcd(lcm, w.denominator)
        acc: dict = {}
        get = acc.get
        for e, w in weights.items():
            if not mod:
                w = int(w * lcm)
            term = self._monomial(e)
            for te, tc in term.items():
                acc[te] = get(te, 0) + w * tc
            _check_size(len(acc))
        if mod:
            out = {}
            for e, c in acc.items():
                c %= mod
                if c:
                    out[e] = c
        else:
            denom = lcm
            for i, d in enumerate(scale):
                if d != 1:
                    denom *= d ** top[i]
            out = {e: Fraction(c, denom) for e, c in acc.items() if c}
        return Poly(self.ring, self.nvars, out, normalized=True)


def exact_divide(f: Poly, g: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    """Return ``q`` with ``q * g == f``; raises ``ValueError`` if ``g`` does not divide ``f``."""
    if g.is_zero():
        raise ZeroPolynomial("division by zero polynomial")
    R = f.ring
    ge, gc = g.leading(order)
    ginv = R.inv(gc)
    q: dict = {}
    r = f
    while not r.is_zero():
        re_, rc = r.leading(order)
        d = tuple(a - b for a, b in zip(re_, ge))
        if any(x < 0 for x in d):
            raise ValueError("not an exact division")
        c = R.mul(rc, ginv)
        q[d] = c
        r = r - g.mul_monomial(d).scale(c)
    return Poly(R, f.nvars, q, normalized=True)


# -- text format -------------------------------------------------------------

def _names(names, n):
    if isinstance(names, str):
        return [f"{names}{i}" for i in range(1, n + 1)]
    names = list(names)
    if len(names) != n:
        raise ValueError(f"{len(names)} display names for {n} variables")
    return names


def format_monomial(e, names) -> str:
    parts = []
    for name, a in zip(names, e):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def format_poly(f: Poly, names: str | Sequence[str] = "x") -> str:
    """Deterministic text: grevlex-descending terms, e.g. ``x1^2*x2 - 3``."""
    if not f.terms:
        return "0"
    nm = _names(names, f.nvars)
    out = []
    for e, c in f.sorted_terms(GREVLEX):
        neg, ctext = f.ring.signed_text(c)
        mono = format_monomial(e, nm)
        if not mono:
            body = ctext
        elif ctext == "1":
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z]+\d+)|(?P<u>u)|(?P<pow>\*\*|\^)|(?P<op>[-+*/()])|(?P<comma>,))"
)


class _Parser:
    def __init__(self, text: str, ring: CoeffRing, nvars: int | None):
        self.text = text
        self.ring = ring
        self.nvars = nvars
        self.toks = []
        pos = 0
        text_len = len(text)
        while pos < text_len:
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if mt is None:
                col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ParseError(f"unexpected character {text[col]!r}", col)
            kind = mt.lastgroup
            start = mt.start(kind)
            self.toks.append((kind, mt.group(kind), start))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg):
        raise ParseError(msg, self.peek()[2])

    def parse(self):
        if not self.toks:
            self.fail("empty polynomial")
        terms = []
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        terms.append((sign, self.term()))
        while True:
            kind, val, _ = self.peek()
            if kind is None:
                break
            if kind == "op" and val in "+-":
                self.take()
                terms.append((-1 if val == "-" else 1, self.term()))
            else:
                self.fail(f"unexpected {val!r}")
        return terms

    def term(self):
        exps: dict[int, int] = {}
        coeff_box = [self.ring.one()]
        self.factor(exps, coeff_box)
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            self.factor(exps, coeff_box)
        return coeff_box[0], exps

    def exponent(self):
        if self.peek()[0] == "pow":
            self.take()
            kind, val, _ = self.peek()
            if kind != "num":
                self.fail("expected an exponent")
            self.take()
            return int(val)
        return 1

    def factor(self, exps, box):
        R = self.ring
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            lit = val
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                k2, v2, _ = self.peek()
                if k2 != "num":
                    self.fail("expected a denominator")
                self.take()
                lit = f"{val}/{v2}"
            try:
                c = R.parse_literal(lit)
            except ZeroDivisionError as exc:
                raise ParseError(str(exc), pos) from exc
            k = self.exponent()
            for _ in range(k):
                box[0] = R.mul(box[0], c)
        elif kind == "var":
            self.take()
            idx = int(re.search(r"\d+$", val).group())
            if idx < 1 or (self.nvars is not None and idx > self.nvars):
                raise ParseError(f"variable {val} outside 1..{self.nvars}", pos)
            exps[idx] = exps.get(idx, 0) + self.exponent()
        elif kind == "u":
            self.take()
            if not isinstance(R, DualNumbers):
                raise ParseError("'u' is only meaningful over a dual-number ring", pos)
            c = R.u()
            for _ in range(self.exponent()):
                box[0] = R.mul(box[0], c)
        elif kind == "op" and val == "(":
            depth, j = 0, self.i
            while j < len(self.toks):
                if self.toks[j][1] == "(":
                    depth += 1
                elif self.toks[j][1] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j == len(self.toks):
                self.fail("unbalanced parenthesis")
            inner = self.text[self.toks[self.i][2] + 1: self.toks[j][2]]
            self.i = j + 1
            try:
                c = R.parse_literal("(" + inner + ")") if isinstance(R, (DualNumbers, ProductField)) \
                    else R.parse_literal(inner)
            except ParseError as exc:
                raise ParseError(str(exc), pos) from exc
            for _ in range(self.exponent()):
                box[0] = R.mul(box[0], c)
        else:
            self.fail("expected a coefficient or variable" if kind else "unexpected end of input")


def parse_poly(text: str, ring: CoeffRing | None = None, nvars: int | None = None) -> Poly:
    """Parse the polynomial grammar (``x1^2*x2 - 3``, ``1/2*x1``, ``(1+2u)*x2``).

    With ``nvars=None`` the arity is the largest variable index seen.
    """
    ring = ring or Rationals()
    terms = _Parser(text, ring, nvars).parse()
    n = nvars if nvars is not None else max((max(ex, default=0) for _, (_, ex) in terms), default=0)
    acc: dict = {}
    for sign, (c, ex) in terms:
        e = [0] * n
        for k, a in ex.items():
            e[k - 1] += a
        e = tuple(e)
        if sign < 0:
            c = ring.neg(c)
        acc[e] = ring.add(acc[e], c) if e in acc else c
    return Poly(ring, n, {e: c for e, c in acc.items() if not ring.is_zero(c)}, normalized=True)


def poly_arith(f: Poly, g: Poly, op: str) -> Poly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def leading_term(f: Poly, order: MonomialOrder):
    return f.leading_term(order)


def degree_in(f: Poly, i: int):
    return f.degree_in(i)


def random_poly(ring: CoeffRing, nvars: int, rng, max_deg: int = 3, max_terms: int = 4,
                nonzero: bool = False, height: int = 5) -> Poly:
    """Seeded random polynomial with total degree <= ``max_deg``."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            d = rng.randint(0, max_deg)
            e = [0] * nvars
            for _ in range(d):
                if nvars:
                    e[rng.randrange(nvars)] += 1
            terms[tuple(e)] = ring.random_element(rng, height)
        f = Poly(ring, nvars, terms)
        if f or not nonzero:
            return f
