"""Iteration of f(x) = 1 - 1/(4x) on [1/2, 1]; the fixed point is 1/2."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numeric import Backend, Scalar, backend_of, half, make


class DomainError(ValueError):
    pass


@dataclass
class IterationTrace:
    x: list

    @property
    def k(self) -> int:
        return len(self.x) - 1

    @property
    def backend(self) -> Backend:
        return backend_of(self.x[0])


def _check_domain(x: Scalar) -> None:
    if not (half(backend_of(x)) <= x <= 1):
        raise DomainError(f"x = {x} outside [1/2, 1]")


def apply_f(x: Scalar) -> Scalar:
    _check_domain(x)
    return 1 - 1 / (4 * x)


def iterate_f(x0, k: int, backend: Backend = Backend.EXACT) -> IterationTrace:
    if k < 0:
        raise ValueError("k must be >= 0")
    x = make(x0, backend) if not isinstance(x0, (Fraction, float)) else x0
    _check_domain(x)
    xs = [x]
    for _ in range(k):
        # f maps [1/2, 1] into [1/2, 3/4], so the domain check is only needed once
        x = 1 - 1 / (4 * x)
        xs.append(x)
    return IterationTrace(xs)


def distance_to_fixed_point(trace: IterationTrace) -> list:
    h = half(trace.backend)
    return [x - h for x in trace.x]


def iterate_from_one_closed_form(k: int) -> Fraction:
    """f^k(1) = (k + 2) / (2k + 2); confirmed against :func:`iterate_f` in the tests."""
    return Fraction(k + 2, 2 * k + 2)


def is_non_increasing(trace: IterationTrace) -> bool:
    return all(b <= a for a, b in zip(trace.x, trace.x[1:]))
