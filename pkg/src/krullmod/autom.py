"""Coefficient-fixing changes of variables of ``D[x1..xn]``.

A :class:`VarChange` from old variables ``x`` to new variables ``t`` stores
both directions: ``forward[i]`` is ``t_{i+1}`` written in the ``x``'s and
``backward[i]`` is ``x_{i+1}`` written in the ``t``'s.  Rewriting a
polynomial into the new coordinates is substitution of ``backward``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .coeff import CoeffRing, Rationals
from .errors import RingMismatch, ZeroPolynomial
from .poly import Poly, Substitution, format_poly, substitute


@dataclass(frozen=True)
class VarChange:
    ring: CoeffRing
    nvars: int
    forward: tuple[Poly, ...]
    backward: tuple[Poly, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "forward", tuple(self.forward))
        object.__setattr__(self, "backward", tuple(self.backward))
        if len(self.forward) != self.nvars or len(self.backward) != self.nvars:
            raise RingMismatch("a change of variables needs one image per variable")
        for p in self.forward + self.backward:
            if p.nvars != self.nvars or p.ring != self.ring:
                raise RingMismatch("image in the wrong polynomial ring")

    @cached_property
    def _to_new(self) -> Substitution:
        return Substitution(self.backward)

    @cached_property
    def _to_old(self) -> Substitution:
        return Substitution(self.forward)

    def apply(self, f: Poly) -> Poly:
        """Rewrite ``f(x)`` in the new coordinates."""
        return self._to_new(f) if self.nvars else f

    def pullback(self, g: Poly) -> Poly:
        """Rewrite ``g(t)`` back in the old coordinates."""
        return self._to_old(g) if self.nvars else g

    def is_valid(self) -> bool:
        """Both round trips are the identity on every variable."""
        gens = Poly.gens(self.ring, self.nvars)
        return all(substitute(b, self.forward) == x for b, x in zip(self.backward, gens)) and \
            all(substitute(f, self.backward) == t for f, t in zip(self.forward, gens))

    def is_identity(self) -> bool:
        gens = Poly.gens(self.ring, self.nvars)
        return list(self.backward) == gens and list(self.forward) == gens

    def extend(self, nvars: int) -> "VarChange":
        """The same change on the first variables, fixing ``x_{k+1}..x_nvars``."""
        if nvars < self.nvars:
            raise RingMismatch("cannot restrict a change of variables")
        if nvars == self.nvars:
            return self
        extra = Poly.gens(self.ring, nvars)[self.nvars:]
        return VarChange(
            self.ring, nvars,
            [p.embed(nvars) for p in self.forward] + extra,
            [p.embed(nvars) for p in self.backward] + extra,
            self.label,
        )

    def to_dict(self, old="x", new="t") -> dict:
        return {
            "label": self.label,
            "nvars": self.nvars,
            "forward": [f"{new}{i + 1} = {format_poly(p, old)}" for i, p in enumerate(self.forward)],
            "backward": [f"{old}{i + 1} = {format_poly(p, new)}" for i, p in enumerate(self.backward)],
        }

    def format(self, old="x", new="t") -> str:
        d = self.to_dict(old, new)
        lines = [f"change {d['label'] or 'unnamed'}"]
        lines += ["  " + s for s in d["forward"]]
        lines += ["  " + s for s in d["backward"]]
        return "\n".join(lines)


def identity(nvars: int, ring: CoeffRing | None = None) -> VarChange:
    ring = ring or Rationals()
    gens = Poly.gens(ring, nvars)
    return VarChange(ring, nvars, gens, gens, "identity")


def shear_swap(n: int, d: int, ring: CoeffRing | None = None) -> VarChange:
    """``t1 = xn - x1^d``, ``t_i = x_i`` (1 < i < n), ``tn = x1``."""
    if n < 2:
        raise ValueError("needs at least two variables")
    if d < 1:
        raise ValueError("d must be at least 1")
    ring = ring or Rationals()
    x = Poly.gens(ring, n)
    forward = [x[n - 1] - x[0] ** d] + x[1:n - 1] + [x[0]]
    # inverse: x1 = tn, xn = t1 + tn^d
    backward = [x[n - 1]] + x[1:n - 1] + [x[0] + x[n - 1] ** d]
    return VarChange(ring, n, forward, backward, f"shear_swap(n={n}, d={d})")


def nested_shear(n: int, d: int, l: int, ring: CoeffRing | None = None) -> tuple[VarChange, VarChange]:
    """Second-level shear on top of :func:`shear_swap`.

    Returns ``(full, sub)``: ``sub`` acts on ``t1..t_{n-1}`` by
    ``z1 = t_{n-1} - t1^l``, ``z_i = t_i`` (2 <= i <= n-2), ``z_{n-1} = t1``;
    ``full`` is ``shear_swap(n, d)`` followed by ``sub`` extended with
    ``zn = tn``, i.e. the composite ``x -> z`` on all ``n`` variables.
    """
    if n < 3:
        raise ValueError("needs at least three variables")
    ring = ring or Rationals()
    sub = shear_swap(n - 1, l, ring)
    sub = VarChange(ring, n - 1, sub.forward, sub.backward, f"nested_shear_sub(n={n - 1}, l={l})")
    full = compose(shear_swap(n, d, ring), sub.extend(n))
    full = VarChange(ring, n, full.forward, full.backward, f"nested_shear(n={n}, d={d}, l={l})")
    return full, sub


def power_subst(n: int, d: int, ring: CoeffRing | None = None) -> VarChange:
    """``x_i = t_i + tn^(d^i)`` for ``i < n`` and ``xn = tn``."""
    if n < 1:
        raise ValueError("needs at least one variable")
    if d < 2:
        raise ValueError("d must be at least 2")
    ring = ring or Rationals()
    t = Poly.gens(ring, n)
    last = t[n - 1]
    backward = [t[i] + last ** (d ** (i + 1)) for i in range(n - 1)] + [last]
    forward = [t[i] - last ** (d ** (i + 1)) for i in range(n - 1)] + [last]
    return VarChange(ring, n, forward, backward, f"power_subst(n={n}, d={d})")


def linear_shear(coeffs: Sequence, ring: CoeffRing) -> VarChange:
    """``x_i = t_i + c_i * tn`` for ``i < n``, ``xn = tn``; ``len(coeffs) == n - 1``."""
    n = len(coeffs) + 1
    t = Poly.gens(ring, n)
    last = t[n - 1]
    backward = [t[i] + last.scale(c) for i, c in enumerate(coeffs)] + [last]
    forward = [t[i] - last.scale(c) for i, c in enumerate(coeffs)] + [last]
    shown = ", ".join(ring.format_value(c) for c in coeffs)
    return VarChange(ring, n, forward, backward, f"linear_shear(c=[{shown}])")


def compose(a: VarChange, b: VarChange) -> VarChange:
    """First ``a`` (x -> t), then ``b`` (t -> z); the result maps x -> z."""
    if a.nvars != b.nvars or a.ring != b.ring:
        raise RingMismatch("can only compose changes of the same ring and arity")
    if a.is_identity():
        return b
    if b.is_identity():
        return a
    backward = [substitute(p, b.backward) for p in a.backward]
    forward = [substitute(p, a.forward) for p in b.forward]
    return VarChange(a.ring, a.nvars, forward, backward, f"{a.label} ; {b.label}")


def compose_all(changes: Sequence[VarChange], nvars: int, ring: CoeffRing) -> VarChange:
    out = identity(nvars, ring)
    for c in changes:
        out = compose(out, c.extend(nvars))
    return out


def invert(a: VarChange) -> VarChange:
    return VarChange(a.ring, a.nvars, a.backward, a.forward, f"inverse({a.label})")


# -- monicization ------------------------------------------------------------

def last_var_leading_coeff(f: Poly) -> Poly:
    """Coefficient of the top power of the last variable (poly in n-1 vars)."""
    if f.is_zero():
        raise ZeroPolynomial("zero has no leading coefficient")
    return f.coeffs_in_last()[-1]


def is_monic_in_last(f: Poly) -> bool:
    """Leading coefficient in the last variable is a nonzero constant unit."""
    if f.is_zero() or f.nvars == 0:
        return False
    lc = last_var_leading_coeff(f)
    return lc.is_constant() and f.ring.is_unit(lc.constant_term())


def _normalize_last(g: Poly) -> Poly:
    lc = last_var_leading_coeff(g).constant_term()
    return g.scale(g.ring.inv(lc))


def power_degree(f: Poly, d: int | None = None) -> int:
    """Last-variable degree :func:`monicize` would produce via ``power_subst``."""
    n = f.nvars
    if d is None:
        d = 1 + f.max_var_degree()
    return max(e[n - 1] + sum(a * d ** (i + 1) for i, a in enumerate(e[:n - 1])) for e in f.terms)


def _small_values(ring: CoeffRing, height: int):
    yield ring.zero()
    p = getattr(ring, "p", None)
    for k in range(1, height + 1):
        if p is not None and k > p // 2 + (p == 2):
            break
        yield ring.from_int(k)
        if p is None or (p - k) % p != k:
            yield ring.from_int(-k)


def _linear_candidate(f: Poly, max_tries: int = 4096):
    """First small ``c`` (by height, then lexicographic) making ``f`` monic via ``linear_shear``."""
    R = f.ring
    n = f.nvars
    deg = f.total_degree()
    top = [(e, c) for e, c in f.terms.items() if sum(e) == deg]
    height = (R.p - 1) // 2 + 1 if getattr(R, "p", None) else 3
    vals = list(_small_values(R, height))
    tried = 0
    for h in range(len(vals)):
        for combo in itertools.product(range(h + 1), repeat=n - 1):
            if h and max(combo) != h:
                continue
            tried += 1
            if tried > max_tries:
                return None
            c = [vals[k] for k in combo]
            s = R.zero()
            for e, a in top:
                v = a
                for ci, k in zip(c, e[:n - 1]):
                    for _ in range(k):
                        v = R.mul(v, ci)
                s = R.add(s, v)
            if R.is_unit(s):
                return c
            if n == 1:
                return None
    return None


def monicize(f: Poly, strategy: str = "power") -> tuple[VarChange, Poly]:
    """Change coordinates so ``f`` becomes monic in the last variable.

    Returns ``(phi, g)`` with ``g = phi.apply(f)`` scaled so its top coefficient
    in ``t_n`` is exactly 1.  If ``f`` is already monic up to a unit, ``phi`` is
    the identity.  ``strategy="power"`` uses :func:`power_subst` with
    ``d = 1 + max_i deg_{x_i} f``, which separates the support and so works over
    any field.  ``strategy="linear"`` first looks for a degree-preserving
    :func:`linear_shear` (small coefficients, deterministic order) and falls back
    to the power substitution.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot monicize the zero polynomial")
    if f.nvars == 0:
        raise ValueError("monicize needs at least one variable")
    if strategy not in ("power", "linear"):
        raise ValueError(f"unknown monicization strategy {strategy!r}")
    R, n = f.ring, f.nvars
    if is_monic_in_last(f):
        return identity(n, R), _normalize_last(f)
    if strategy == "linear" and n > 1:
        c = _linear_candidate(f)
        if c is not None:
            phi = linear_shear(c, R)
            return phi, _normalize_last(phi.apply(f))
    phi = power_subst(n, 1 + f.max_var_degree(), R)
    g = phi.apply(f)
    return phi, _normalize_last(g)


def random_change(n: int, ring: CoeffRing, rng, steps: int = 3, max_deg: int = 2) -> VarChange:
    """Seeded random composite of elementary triangular changes and swaps."""
    out = identity(n, ring)
    for _ in range(steps):
        kind = rng.random()
        if n >= 2 and kind < 0.3:
            d = rng.randint(1, max_deg)
            step = shear_swap(n, d, ring)
        elif n >= 2 and kind < 0.5:
            i, j = rng.sample(range(n), 2)
            x = Poly.gens(ring, n)
            x[i], x[j] = x[j], x[i]
            step = VarChange(ring, n, x, x, f"swap({i + 1},{j + 1})")
        else:
            # x_i -> x_i + c * (monomial in the other variables)
            i = rng.randrange(n)
            e = [0] * n
            for k in range(n):
                if k != i:
                    e[k] = rng.randint(0, max_deg)
            c = ring.random_element(rng)
            x = Poly.gens(ring, n)
            bump = Poly.monomial(ring, n, e, c) if not ring.is_zero(c) else Poly.zero(ring, n)
            if all(a == 0 for a in e):
                bump = Poly.zero(ring, n)
            fwd, bwd = list(x), list(x)
            fwd[i] = x[i] - bump
            bwd[i] = x[i] + bump
            step = VarChange(ring, n, fwd, bwd, f"triangular({i + 1})")
        out = compose(out, step)
    return out
