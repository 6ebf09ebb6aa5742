"""Oscillation counts around a centre and partial sums of (a_n - 1/4)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .numeric import Backend, Scalar, make, quarter, zero
from .pq_constructor import divergence_kind, first_violation_index, partial_sum
from .sequences import Constant, EpsilonForm, OscExample31, PQPeriodic, TermSequence

#: sum_{n>=1} (-1)^n / (4 (4n^2 - 1)) = (2 - pi) / 16
OSC31_SUM_LIMIT = (2 - math.pi) / 16


class Oscillation(enum.Enum):
    OSCILLATORY = "oscillatory-witnessed"
    ABOVE_ONLY = "above-only"
    BELOW_ONLY = "below-only"
    INCONCLUSIVE = "inconclusive"


class Divergence(enum.Enum):
    CONVERGES = "converges-witnessed"
    DIVERGES = "diverges-certified"
    UNKNOWN = "unknown"


@dataclass
class OscillationReport:
    center: Scalar
    horizon: int
    count_above: int
    count_below: int
    count_equal: int
    classification: Oscillation
    structural: bool = False


@dataclass
class ChiharaReport:
    partial_sums: list
    sup_so_far: Scalar
    bound_violated_at: int | None
    divergence_verdict: Divergence
    hypothesis_met: bool
    divergence_kind: str = ""
    limit: float | None = None
    bound: Scalar = Fraction(1, 4)
    terms: list = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.partial_sums)


def _structural_oscillation(seq: TermSequence, center: Scalar) -> bool:
    if center != quarter(seq.backend):
        return False
    return bool(seq.oscillates_about_quarter)


def classify_oscillation(seq: TermSequence, center=None, horizon: int = 1000) -> OscillationReport:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    c = quarter(seq.backend) if center is None else make(center, seq.backend)
    above = below = equal = 0
    for n in range(1, horizon + 1):
        a = seq.term(n)
        if a > c:
            above += 1
        elif a < c:
            below += 1
        else:
            equal += 1
    structural = _structural_oscillation(seq, c)
    floor_q = horizon // 4
    if structural and above >= floor_q and below >= floor_q and above and below:
        cls = Oscillation.OSCILLATORY
    elif isinstance(seq, Constant) and seq.a != c:
        cls = Oscillation.ABOVE_ONLY if seq.a > c else Oscillation.BELOW_ONLY
    else:
        cls = Oscillation.INCONCLUSIVE
    return OscillationReport(c, horizon, above, below, equal, cls, structural)


def chihara_sums(seq: TermSequence, horizon: int, bound=None) -> ChiharaReport:
    """Partial sums S_N = sum_{n<=N} (a_n - 1/4) against the 1/4 bound.

    ``hypothesis_met`` is False as soon as some a_n < 1/4 appears, i.e. the
    prefix already falls outside the a_n >= 1/4 regime the bound was
    stated for.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    b = seq.backend
    qt = quarter(b)
    bnd = qt if bound is None else make(bound, b)
    s = zero(b)
    sums, terms = [], []
    sup = None
    violated = None
    hyp = True
    for n in range(1, horizon + 1):
        a = seq.term(n)
        terms.append(a)
        if a < qt:
            hyp = False
        s = s + (a - qt)
        sums.append(s)
        sup = s if sup is None or s > sup else sup
        if violated is None and s > bnd:
            violated = n

    verdict, kind, limit = Divergence.UNKNOWN, "", None
    if isinstance(seq, PQPeriodic):
        verdict = Divergence.DIVERGES
        kind = divergence_kind(seq.p, seq.q)
    elif isinstance(seq, OscExample31):
        verdict = Divergence.CONVERGES
        limit = OSC31_SUM_LIMIT
    elif isinstance(seq, Constant):
        if seq.a == qt:
            verdict, limit = Divergence.CONVERGES, 0.0
        else:
            verdict = Divergence.DIVERGES
            kind = divergence_kind(0, seq.a - qt) if seq.a > qt else divergence_kind(qt - seq.a, 0)
    return ChiharaReport(sums, sup, violated, verdict, hyp, kind, limit, bnd, terms)


def pq_partial_sum(seq: PQPeriodic, N: int):
    return partial_sum(seq.p, seq.q, N)


def pq_first_violation(seq: PQPeriodic, bound=Fraction(1, 4)) -> int | None:
    return first_violation_index(seq.p, seq.q, bound)


def abs_sum_example31(k: int, backend: Backend = Backend.EXACT) -> Scalar:
    """sum_{n<=k} |a_n - 1/4| for the osc31 family, summed directly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    seq = OscExample31(backend=backend)
    qt = quarter(backend)
    return sum((abs(seq.term(n) - qt) for n in range(1, k + 1)), zero(backend))


def abs_sum_example31_closed_form(k: int) -> Fraction:
    # telescopes: 1/(4(4n^2-1)) = (1/8)(1/(2n-1) - 1/(2n+1))
    return Fraction(1, 8) * (1 - Fraction(1, 2 * k + 1))
