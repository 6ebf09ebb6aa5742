"""Scalar backends.

Two representations are supported and never mixed:

* ``Backend.EXACT``: :class:`fractions.Fraction` (always in lowest terms).
* ``Backend.FLOAT``: binary64 ``float`` compared with a :class:`Tolerance`.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

DEFAULT_MAX_DENOM_BITS = 2**20


class BackendMismatch(TypeError):
    pass


class DenominatorOverflow(ArithmeticError):
    pass


class Backend(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"

    @classmethod
    def parse(cls, name: "str | Backend") -> "Backend":
        if isinstance(name, Backend):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown backend {name!r} (expected exact|float)") from None


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not (0 < v <= 1e-3):
                raise ValueError(f"{name} must lie in (0, 1e-3], got {v!r}")


DEFAULT_TOL = Tolerance()


def backend_of(x: Scalar) -> Backend:
    if isinstance(x, Fraction):
        return Backend.EXACT
    if isinstance(x, float):
        return Backend.FLOAT
    raise TypeError(f"not a scalar: {x!r}")


def check_backend(backend: Backend, *xs: Scalar) -> None:
    """Raise BackendMismatch unless every ``x`` is stored in ``backend``."""
    for x in xs:
        if backend_of(x) is not backend:
            raise BackendMismatch(f"{x!r} is not a {backend.value} scalar")


def make(value, backend: Backend = Backend.EXACT) -> Scalar:
    """Build a scalar from an int, Fraction, float or string.

    Strings are parsed with :func:`parse_scalar`. Converting a float into
    the exact backend goes through its shortest decimal repr, so ``0.22``
    becomes ``11/50`` rather than the binary expansion.
    """
    if isinstance(value, str):
        return parse_scalar(value, backend)
    if backend is Backend.EXACT:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(value)
    return float(value)


def parse_scalar(text: str, backend: Backend = Backend.EXACT) -> Scalar:
    """Parse ``"p/q"`` or a decimal literal."""
    s = text.strip()
    try:
        exact = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse scalar {text!r}") from None
    return exact if backend is Backend.EXACT else float(exact)


def format_scalar(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def to_float(x: Scalar) -> float:
    # float(Fraction) is correctly rounded
    return float(x)


def approx_eq(x: Scalar, y: Scalar, tol: Tolerance = DEFAULT_TOL) -> bool:
    bx, by = backend_of(x), backend_of(y)
    if bx is not by:
        raise BackendMismatch(f"cannot compare {bx.value} with {by.value}")
    if bx is Backend.EXACT:
        return x == y
    return abs(x - y) <= max(tol.abs_tol, tol.rel_tol * max(abs(x), abs(y)))


def zero(backend: Backend) -> Scalar:
    return Fraction(0) if backend is Backend.EXACT else 0.0


def one(backend: Backend) -> Scalar:
    return Fraction(1) if backend is Backend.EXACT else 1.0


def half(backend: Backend) -> Scalar:
    return Fraction(1, 2) if backend is Backend.EXACT else 0.5


def quarter(backend: Backend) -> Scalar:
    return Fraction(1, 4) if backend is Backend.EXACT else 0.25


def max_denominator_bits() -> int:
    env = os.environ.get("CHAINSEQ_MAX_DENOM_BITS")
    if env:
        return int(env)
    return DEFAULT_MAX_DENOM_BITS


def guard_denominator(x: Scalar, budget: int | None = None) -> None:
    if not isinstance(x, Fraction):
        return
    if budget is None:
        budget = max_denominator_bits()
    bits = x.denominator.bit_length()
    if bits > budget:
        raise DenominatorOverflow(f"denominator has {bits} bits, budget is {budget}")
