"""Parameter sequences for a_n = g_n (1 - g_{n-1}) and chain verdicts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .numeric import (
    DEFAULT_TOL,
    Backend,
    Scalar,
    Tolerance,
    approx_eq,
    check_backend,
    guard_denominator,
    half,
    make,
    max_denominator_bits,
    one,
    quarter,
    zero,
)
from .sequences import Constant, OscExample31, PQPeriodic, TermSequence


class RefutedRun(ValueError):
    def __init__(self, index: int, reason: str = ""):
        super().__init__(f"parameter run fails at n={index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass
class ParameterRun:
    """g_0..g_N. When ``first_invalid`` is set, ``g`` ends at that index and
    the last entry is the offending value (None after a division by zero)."""

    g: list
    horizon: int
    backend: Backend
    first_invalid: int | None = None
    reason: str = ""

    @property
    def g0(self) -> Scalar:
        return self.g[0]

    @property
    def valid(self) -> bool:
        return self.first_invalid is None

    def last_valid(self) -> int:
        return self.horizon if self.first_invalid is None else self.first_invalid - 1

    def is_valid_at(self, n: int) -> bool:
        return self.first_invalid is None or n < self.first_invalid


class VerdictKind(enum.Enum):
    CERTIFIED = "certified-chain"
    REFUTED = "refuted-at"
    CONSISTENT = "consistent-up-to"


@dataclass
class ChainVerdict:
    kind: VerdictKind
    horizon: int
    index: int | None = None
    reason: str = ""
    certificate: object = None

    @classmethod
    def certified(cls, horizon, certificate, reason=""):
        return cls(VerdictKind.CERTIFIED, horizon, certificate=certificate, reason=reason)

    @classmethod
    def refuted(cls, horizon, index, reason):
        if index < 1:
            raise ValueError("refutation index must be >= 1")
        return cls(VerdictKind.REFUTED, horizon, index=index, reason=reason)

    @classmethod
    def consistent(cls, horizon):
        return cls(VerdictKind.CONSISTENT, horizon)


def minimal_parameters(seq: TermSequence, horizon: int, g0=None,
                       tol: Tolerance = DEFAULT_TOL,
                       bit_budget: int | None = None) -> ParameterRun:
    """Run g_n = a_n / (1 - g_{n-1}) from ``g0`` (default 0).

    Stops at the first n where 1 - g_{n-1} vanishes or g_n leaves [0, 1];
    that index is recorded in ``first_invalid``. Seeded at 0, the run is the
    termwise smallest parameter sequence, so an escape refutes chain-ness.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    b = seq.backend
    g_prev = zero(b) if g0 is None else make(g0, b)
    if not (0 <= g_prev < 1):
        raise ValueError("g0 must lie in [0, 1)")
    budget = max_denominator_bits() if bit_budget is None else bit_budget
    exact = b is Backend.EXACT
    g = [g_prev]
    for n in range(1, horizon + 1):
        gap = 1 - g_prev
        if (gap == 0) if exact else (gap <= tol.abs_tol):
            g.append(None)
            return ParameterRun(g, horizon, b, n, "division by zero (g_{n-1} = 1)")
        a = seq.term(n)
        gn = a / gap
        if exact:
            guard_denominator(gn, budget)
        g.append(gn)
        if not (0 <= gn <= 1):
            return ParameterRun(g, horizon, b, n, f"g_{n} outside [0, 1]")
        g_prev = gn
    return ParameterRun(g, horizon, b)


def maximal_parameters(seq: TermSequence, horizon: int, lookahead: int | None = None,
                       top=None) -> ParameterRun:
    """Approximate the maximal parameter sequence by backward recursion.

    Starts from ``g_{N+L} = top`` and back-solves g_{n-1} = 1 - a_n / g_n.
    With ``top = 1`` each value is an upper bound for every parameter
    sequence; when a_n -> 1/4 the default top is 1/2, which converges
    far faster. ``lookahead`` defaults to ``9 * horizon``.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    b = seq.backend
    if lookahead is None:
        lookahead = 9 * horizon
    if top is None:
        top = half(b) if seq.limit is not None and seq.limit == quarter(b) else one(b)
    top = make(top, b)
    start = horizon + lookahead
    if seq.length is not None:
        start = min(start, seq.length)
        if start < horizon:
            raise ValueError("horizon beyond the table length")
    g = [None] * (horizon + 1)
    cur = top
    if start == horizon:
        g[horizon] = cur
    for n in range(start, 0, -1):
        if cur == 0:
            raise RefutedRun(n, "backward recursion reached g_n = 0")
        cur = 1 - seq.term(n) / cur
        if not (0 <= cur <= 1):
            raise RefutedRun(n, f"backward value g_{n - 1} outside [0, 1]")
        if n - 1 <= horizon:
            g[n - 1] = cur
    return ParameterRun(g, horizon, b)


def run_from_values(values, backend: Backend = Backend.EXACT) -> ParameterRun:
    g = [make(v, backend) for v in values]
    bad = next((i for i, x in enumerate(g) if not (0 <= x <= 1)), None)
    run = ParameterRun(g, len(g) - 1, backend)
    if bad is not None:
        run.first_invalid = max(bad, 1)
        run.reason = f"g_{bad} outside [0, 1]"
    return run


def verify_parameters(seq: TermSequence, run: ParameterRun,
                      tol: Tolerance = DEFAULT_TOL) -> bool:
    if not run.valid:
        return False
    check_backend(seq.backend, run.g[0])
    for n in range(0, run.horizon + 1):
        if not (0 <= run.g[n] <= 1):
            return False
        if n >= 1 and not approx_eq(seq.term(n), run.g[n] * (1 - run.g[n - 1]), tol):
            return False
    return True


def closed_form_g31(n: int, backend: Backend = Backend.EXACT) -> Scalar:
    """g_n = (2n^2 - 1/4 + (-1)^n / 4) / (2n + 1)^2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    s = -1 if n % 2 else 1
    val = (Fraction(2 * n * n) - Fraction(1, 4) + Fraction(s, 4)) / (2 * n + 1) ** 2
    return val if backend is Backend.EXACT else float(val)


def closed_form_run31(horizon: int, backend: Backend = Backend.EXACT) -> ParameterRun:
    return ParameterRun([closed_form_g31(n, backend) for n in range(horizon + 1)],
                        horizon, backend)


def structural_certificate(seq: TermSequence):
    """Return a certificate object when the family is proven to be a chain,
    else None."""
    if isinstance(seq, Constant):
        if seq.a <= quarter(seq.backend):
            return {"kind": "constant", "a": seq.a,
                    "parameters": "g_n = 1/2 for all n" if seq.a == quarter(seq.backend)
                    else "g_n = (1 - sqrt(1 - 4a)) / 2 for all n"}
        return None
    if isinstance(seq, OscExample31):
        return {"kind": "closed-form-parameters",
                "parameters": "g_n = (2n^2 - 1/4 + (-1)^n/4) / (2n+1)^2"}
    if isinstance(seq, PQPeriodic):
        from .pq_constructor import FeasibilityFailure, PQConfig, certify, search_config
        if seq.eps is not None and seq.gamma is not None:
            cfg = PQConfig(seq.p, seq.q, seq.eps, seq.gamma)
        else:
            cfg = search_config(seq.p, seq.q)
            if cfg is None:
                return None
        try:
            return certify(cfg)
        except (FeasibilityFailure, ValueError):
            return None
    return None


def verdict(seq: TermSequence, horizon: int) -> ChainVerdict:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    cert = structural_certificate(seq)
    if cert is not None:
        return ChainVerdict.certified(horizon, cert)
    if seq.length is not None:
        horizon = min(horizon, seq.length)
    run = minimal_parameters(seq, horizon)
    if run.first_invalid is not None:
        return ChainVerdict.refuted(horizon, run.first_invalid, run.reason)
    return ChainVerdict.consistent(horizon)


def limit_witness_g(seq: TermSequence, horizon: int, tol: Tolerance = DEFAULT_TOL) -> Scalar:
    run = minimal_parameters(seq, horizon, tol=tol)
    if run.first_invalid is not None:
        raise RefutedRun(run.first_invalid, run.reason)
    return run.g[horizon]
