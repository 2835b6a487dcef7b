"""Exception hierarchy shared by every krullmod module."""


class KrullModError(Exception):
    """Base class for all library errors."""


class RingMismatch(KrullModError, ValueError):
    """Operands live in different coefficient rings or arities."""


class NotAUnit(KrullModError, ZeroDivisionError):
    """Attempted to invert a non-unit coefficient."""


class ZeroPolynomial(KrullModError, ValueError):
    """An operation needed a nonzero polynomial."""


class ResourceLimit(KrullModError, RuntimeError):
    """A configured term/pair/coefficient-size ceiling was exceeded."""


class UnsupportedRing(KrullModError, TypeError):
    """The coefficient ring does not support the requested operation."""


class ZeroModule(KrullModError, ValueError):
    """The operation presupposes a nonzero module."""


class NotTorsion(KrullModError, ValueError):
    """The module has a generator with zero annihilator."""


class NotMonic(KrullModError, ValueError):
    """Descent needs a polynomial monic in the last variable of positive degree."""


class ParseError(KrullModError, ValueError):
    """Malformed polynomial, coefficient or problem-file text."""

    def __init__(self, message, pos=None, line=None):
        self.message = message
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"column {pos + 1}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
