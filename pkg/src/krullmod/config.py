"""Resource ceilings for substitution and Groebner computations.

The active :class:`Limits` live in a context variable so concurrent callers
(threads, the ``hunt`` worker pool) can tighten them independently::

    with limits(max_terms=10_000):
        dim_descent(P)
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    max_terms: int = 10**6
    max_pairs: int = 10**5
    max_coeff_bits: int = 1 << 16
    # total terms across the relations of one descended presentation
    max_presentation: int = 50_000


_current: ContextVar[Limits] = ContextVar("krullmod_limits", default=Limits())


def get_limits() -> Limits:
    return _current.get()


@contextmanager
def limits(**overrides):
    token = _current.set(replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
