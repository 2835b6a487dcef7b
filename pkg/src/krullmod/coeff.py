"""Exact coefficient rings.

Four rings are provided: the rationals, prime fields, truncated polynomial
rings ``K[u]/(u^m)`` ("dual numbers" for ``m = 2``) and finite products
``K x ... x K``.  The first two are fields and back every Groebner-basis
computation; the last two are commutative artinian rings used for the
nilradical tests.

Ring objects operate on *raw* values (``Fraction``, ``int`` or tuples) so the
polynomial layer can run tight loops without wrapper objects.  :class:`Coeff`
pairs a raw value with its ring for the public element-level API.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import NotAUnit, ParseError, RingMismatch, UnsupportedRing


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


class CoeffRing:
    """Abstract coefficient ring.  Subclasses are immutable value objects."""

    is_field = False
    # raw values support Python ``+``/``*`` followed by :meth:`normalize`
    numeric = False

    def zero(self): raise NotImplementedError
    def one(self): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def from_fraction(self, q: Fraction): raise NotImplementedError
    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def is_zero(self, a) -> bool: raise NotImplementedError
    def is_unit(self, a) -> bool: raise NotImplementedError
    def inv(self, a): raise NotImplementedError
    def is_regular(self, a) -> bool: raise NotImplementedError
    def descriptor(self) -> str: raise NotImplementedError
    def random_element(self, rng, height: int = 5): raise NotImplementedError
    def signed_text(self, a) -> tuple[bool, str]: raise NotImplementedError

    def normalize(self, a):
        return a

    def is_one(self, a) -> bool:
        return a == self.one()

    def parse_literal(self, text: str):
        """Parse an integer or ``p/q`` literal into the ring."""
        text = text.strip()
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient literal {text!r}") from exc
        return self.from_fraction(q)

    def format_value(self, a) -> str:
        neg, text = self.signed_text(a)
        return "-" + text if neg else text

    def __call__(self, value) -> "Coeff":
        """Coerce an int, Fraction, literal string or raw value into a :class:`Coeff`."""
        if isinstance(value, Coeff):
            if value.ring != self:
                raise RingMismatch(f"{value.ring.descriptor()} vs {self.descriptor()}")
            return value
        if isinstance(value, str):
            return Coeff(self, self.parse_literal(value))
        if isinstance(value, bool):
            raise TypeError("bool is not a coefficient")
        if isinstance(value, int):
            return Coeff(self, self.from_int(value))
        if isinstance(value, Fraction):
            return Coeff(self, self.from_fraction(value))
        return Coeff(self, self.normalize(value))

    def __str__(self) -> str:
        return self.descriptor()


@dataclass(frozen=True)
class Rationals(CoeffRing):
    is_field = True
    numeric = True

    def zero(self): return Fraction(0)
    def one(self): return Fraction(1)
    def from_int(self, n): return Fraction(n)
    def from_fraction(self, q): return Fraction(q)
    def add(self, a, b): return a + b
    def sub(self, a, b): return a - b
    def mul(self, a, b): return a * b
    def neg(self, a): return -a
    def is_zero(self, a): return a == 0
    def is_unit(self, a): return a != 0
    def is_regular(self, a): return a != 0
    def descriptor(self): return "Q"

    def inv(self, a):
        if a == 0:
            raise NotAUnit("0 has no inverse in Q")
        return Fraction(1) / a

    def random_element(self, rng, height=5):
        den = rng.choice((1, 1, 1, 2, 3))
        return Fraction(rng.randint(-height, height), den)

    def signed_text(self, a):
        return a < 0, str(abs(a))


@dataclass(frozen=True)
class PrimeField(CoeffRing):
    p: int
    is_field = True
    numeric = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def zero(self): return 0
    def one(self): return 1 % self.p
    def from_int(self, n): return n % self.p
    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def neg(self, a): return (-a) % self.p
    def normalize(self, a): return a % self.p
    def is_zero(self, a): return a == 0
    def is_unit(self, a): return a != 0
    def is_regular(self, a): return a != 0
    def descriptor(self): return f"F{self.p}"

    def from_fraction(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise NotAUnit(f"denominator {q.denominator} vanishes mod {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NotAUnit(f"0 has no inverse in F{self.p}")
        return pow(a, -1, self.p)

    def random_element(self, rng, height=5):
        return rng.randrange(self.p)

    def signed_text(self, a):
        # symmetric residues read better: 4 in F5 prints as -1
        if self.p > 2 and a > self.p // 2:
            return True, str(self.p - a)
        return False, str(a)


def _base_ring(base) -> CoeffRing:
    if isinstance(base, CoeffRing):
        if not base.is_field:
            raise UnsupportedRing("base of an artinian ring must be Q or a prime field")
        return base
    if base in ("Q", None):
        return Rationals()
    return PrimeField(int(base))


_UTERM = re.compile(r"\s*([+-]?)\s*([0-9/]*)\s*\*?\s*(u(?:\s*\^\s*(\d+))?)?\s*")


@dataclass(frozen=True)
class DualNumbers(CoeffRing):
    """``base[u]/(u^m)``; values are length-``m`` tuples of base values."""

    base: Any
    m: int = 2

    def __post_init__(self):
        object.__setattr__(self, "base", _base_ring(self.base))
        if self.m < 2:
            raise ValueError("nilpotency order must be at least 2")

    def zero(self):
        return (self.base.zero(),) * self.m

    def one(self):
        return (self.base.one(),) + (self.base.zero(),) * (self.m - 1)

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero(),) * (self.m - 1)

    def from_fraction(self, q):
        return (self.base.from_fraction(q),) + (self.base.zero(),) * (self.m - 1)

    def normalize(self, a):
        a = tuple(self.base.normalize(x) for x in a)
        if len(a) != self.m:
            raise ValueError(f"dual-number value needs {self.m} entries")
        return a

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        out = [B.zero()] * self.m
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j in range(self.m - i):
                y = b[j]
                if not B.is_zero(y):
                    out[i + j] = B.add(out[i + j], B.mul(x, y))
        return tuple(out)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def is_unit(self, a):
        return not self.base.is_zero(a[0])

    # local ring: zero-divisors are exactly the non-units
    is_regular = is_unit

    def inv(self, a):
        B = self.base
        if B.is_zero(a[0]):
            raise NotAUnit("constant term is zero")
        c0 = B.inv(a[0])
        out = [c0]
        for k in range(1, self.m):
            s = B.zero()
            for j in range(1, k + 1):
                s = B.add(s, B.mul(a[j], out[k - j]))
            out.append(B.neg(B.mul(s, c0)))
        return tuple(out)

    def u(self):
        return (self.base.zero(), self.base.one()) + (self.base.zero(),) * (self.m - 2)

    def descriptor(self):
        return f"{self.base.descriptor()}[u]/(u^{self.m})"

    def random_element(self, rng, height=5):
        return tuple(self.base.random_element(rng, height) for _ in range(self.m))

    def parse_literal(self, text):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        if not text:
            raise ParseError("empty dual-number literal")
        out = list(self.zero())
        pos = 0
        while pos < len(text):
            mt = _UTERM.match(text, pos)
            if mt is None or mt.end() == pos:
                raise ParseError(f"bad dual-number literal {text!r}", pos)
            sign, num, upart, exp = mt.groups()
            if not num and not upart:
                raise ParseError(f"bad dual-number literal {text!r}", pos)
            c = self.base.parse_literal(num) if num else self.base.one()
            if sign == "-":
                c = self.base.neg(c)
            k = 0 if not upart else (int(exp) if exp else 1)
            if k < self.m:
                out[k] = self.base.add(out[k], c)
            pos = mt.end()
            if pos < len(text) and text[pos] not in "+-":
                raise ParseError(f"bad dual-number literal {text!r}", pos)
        return tuple(out)

    def signed_text(self, a):
        if all(self.base.is_zero(x) for x in a[1:]):
            return self.base.signed_text(a[0])
        parts = []
        for k, x in enumerate(a):
            if self.base.is_zero(x):
                continue
            neg, t = self.base.signed_text(x)
            if k == 0:
                body = t
            else:
                body = ("" if t == "1" else t) + ("u" if k == 1 else f"u^{k}")
            parts.append(("-" if neg else ("+" if parts else "")) + body)
        return False, "(" + "".join(parts) + ")"


@dataclass(frozen=True)
class ProductField(CoeffRing):
    """``base^r`` with componentwise operations; values are length-``r`` tuples."""

    base: Any
    r: int = 2

    def __post_init__(self):
        object.__setattr__(self, "base", _base_ring(self.base))
        if self.r < 2:
            raise ValueError("a product ring needs at least two factors")

    def zero(self): return (self.base.zero(),) * self.r
    def one(self): return (self.base.one(),) * self.r
    def from_int(self, n): return (self.base.from_int(n),) * self.r
    def from_fraction(self, q): return (self.base.from_fraction(q),) * self.r

    def normalize(self, a):
        a = tuple(self.base.normalize(x) for x in a)
        if len(a) != self.r:
            raise ValueError(f"product value needs {self.r} entries")
        return a

    def add(self, a, b): return tuple(self.base.add(x, y) for x, y in zip(a, b))
    def sub(self, a, b): return tuple(self.base.sub(x, y) for x, y in zip(a, b))
    def mul(self, a, b): return tuple(self.base.mul(x, y) for x, y in zip(a, b))
    def neg(self, a): return tuple(self.base.neg(x) for x in a)
    def is_zero(self, a): return all(self.base.is_zero(x) for x in a)
    def is_unit(self, a): return not any(self.base.is_zero(x) for x in a)
    is_regular = is_unit

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit("a component is zero")
        return tuple(self.base.inv(x) for x in a)

    def component(self, a, j):
        return a[j]

    def descriptor(self):
        return "x".join([self.base.descriptor()] * self.r)

    def random_element(self, rng, height=5):
        return tuple(self.base.random_element(rng, height) for _ in range(self.r))

    def parse_literal(self, text):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            items = text[1:-1].split(",")
            if len(items) != self.r:
                raise ParseError(f"expected {self.r} components in {text!r}")
            return tuple(self.base.parse_literal(t) for t in items)
        return (self.base.parse_literal(text),) * self.r

    def signed_text(self, a):
        if all(x == a[0] for x in a):
            return self.base.signed_text(a[0])
        return False, "(" + ",".join(self.base.format_value(x) for x in a) + ")"


_RING_RE = re.compile(
    r"^(?P<base>Q|QQ|F\d+|GF\(\d+\))"
    r"(?:(?P<dual>\[u\]/\(u\^(?P<m>\d+)\))|(?P<prod>(?:x(?:Q|QQ|F\d+|GF\(\d+\)))+))?$"
)


def parse_ring(text: str) -> CoeffRing:
    """Parse a ring descriptor: ``Q``, ``F7``, ``F3[u]/(u^2)``, ``F3xF3``."""
    compact = re.sub(r"\s+", "", text)
    mt = _RING_RE.match(compact)
    if mt is None:
        raise ParseError(f"unknown coefficient ring {text!r}")
    b = mt.group("base")
    if b in ("Q", "QQ"):
        base: CoeffRing = Rationals()
    else:
        p = int(re.sub(r"\D", "", b))
        if not is_prime(p):
            raise ParseError(f"{p} is not prime")
        base = PrimeField(p)
    if mt.group("dual"):
        return DualNumbers(base, int(mt.group("m")))
    if mt.group("prod"):
        factors = mt.group("prod").split("x")[1:]
        if any(_base_ring_text(f) != base.descriptor() for f in factors):
            raise ParseError("product factors must be equal")
        return ProductField(base, len(factors) + 1)
    return base


def _base_ring_text(t: str) -> str:
    if t in ("Q", "QQ"):
        return "Q"
    return "F" + re.sub(r"\D", "", t)


@dataclass(frozen=True)
class Coeff:
    """An element of a :class:`CoeffRing`; immutable."""

    ring: CoeffRing
    value: Any = field(compare=True)

    def _other(self, other) -> "Coeff":
        if isinstance(other, Coeff):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring.descriptor()} vs {other.ring.descriptor()}")
            return other
        return self.ring(other)

    def __add__(self, other): return arith(self, self._other(other), "add")
    def __radd__(self, other): return arith(self._other(other), self, "add")
    def __sub__(self, other): return arith(self, self._other(other), "sub")
    def __rsub__(self, other): return arith(self._other(other), self, "sub")
    def __mul__(self, other): return arith(self, self._other(other), "mul")
    def __rmul__(self, other): return arith(self._other(other), self, "mul")
    def __neg__(self): return Coeff(self.ring, self.ring.neg(self.value))

    def __truediv__(self, other):
        return self * invert(self._other(other))

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        out = self.ring(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Coeff):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self.value == self.ring(other).value
            except NotAUnit:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __str__(self):
        return self.ring.format_value(self.value)

    def __repr__(self):
        return f"Coeff({self.ring.descriptor()}, {self})"


def arith(a: Coeff, b: Coeff, op: str) -> Coeff:
    """Exact ``add``/``sub``/``mul`` of two coefficients of the same ring."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring.descriptor()} vs {b.ring.descriptor()}")
    fn = {"add": a.ring.add, "sub": a.ring.sub, "mul": a.ring.mul}.get(op)
    if fn is None:
        raise ValueError(f"unknown operation {op!r}")
    return Coeff(a.ring, fn(a.value, b.value))


def invert(c: Coeff) -> Coeff:
    return Coeff(c.ring, c.ring.inv(c.value))


def is_regular(c: Coeff) -> bool:
    """True iff ``c`` is not a zero-divisor (commutative rings only ship here)."""
    return c.ring.is_regular(c.value)
