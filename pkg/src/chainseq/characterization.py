"""The c_n characterisation of chains a_n = (1 + (-1)^n eps_n) / 4.

Forward: write g_n = (1 + (-1)^n delta_n) / 2, set c_1 = 1 and
c_{n+1} = c_n (1 + (-1)^n delta_{n-1}), then test

    (i)  c_{n+1} <= 2 c_n
    (ii) sum_{m>=n} (-1)^{m-n} c_m eps_m = (-1)^n (c_{n+1} - c_n).

Backward: from (c, eps) set delta_{n-1} = (1/c_n) sum_{m>=n} (-1)^{m-n} c_m eps_m
and h_n = (1 + (-1)^n delta_n) / 2.

Condition (ii) only holds for a parameter sequence whose c stays bounded.
The minimal run (g_0 = 0) of a sequence with a_n -> 1/4 typically has
g_n = 1/2 - O(1/n) and an unbounded c, so :func:`characterize` defaults to
the maximal parameters from :func:`chainseq.chain.maximal_parameters`.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field

from .chain import ParameterRun, RefutedRun, maximal_parameters, minimal_parameters
from .numeric import DEFAULT_TOL, Backend, Scalar, Tolerance, backend_of, half, make, one
from .sequences import EpsilonRule, TermSequence, epsilon_rule_of


class DegenerateC(ValueError):
    pass


class ConditionViolation(ValueError):
    """c fails condition (i)."""


_UNIT_ROUNDOFF = sys.float_info.epsilon / 2


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass
class DeltaSequence:
    delta: list  # indexed 0..N

    @property
    def horizon(self) -> int:
        return len(self.delta) - 1


@dataclass
class CSequence:
    """c_1..c_{N+1}; ``c[n]`` is c_n."""

    values: list

    def __getitem__(self, n: int) -> Scalar:
        if n < 1:
            raise IndexError("c is indexed from 1")
        return self.values[n - 1]

    @property
    def last(self) -> int:
        return len(self.values)

    def condition_i_violation(self) -> int | None:
        """Smallest n with c_{n+1} > 2 c_n, or None."""
        for n in range(1, self.last):
            if self[n + 1] > 2 * self[n]:
                return n
        return None

    def condition_i_ok(self) -> bool:
        return self.condition_i_violation() is None

    def max(self, upto: int | None = None) -> Scalar:
        vals = self.values if upto is None else self.values[:upto]
        return max(vals)


class CheckVerdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionIICheck:
    n: int
    residual: Scalar
    tail_bound: Scalar | None
    verdict: CheckVerdict


@dataclass
class CharacterizationReport:
    condition_i_ok: bool
    checks: list
    truncation_M: int
    run_kind: str = ""
    c_max: Scalar | None = None
    extra: dict = field(default_factory=dict)

    @property
    def condition_ii_residuals(self) -> list:
        return [c.residual for c in self.checks]

    @property
    def tail_bound(self) -> list:
        return [c.tail_bound for c in self.checks]

    @property
    def all_pass(self) -> bool:
        return self.condition_i_ok and all(c.verdict is CheckVerdict.PASS for c in self.checks)


def deltas_from_run(run: ParameterRun) -> DeltaSequence:
    upto = run.last_valid()
    return DeltaSequence([_sign(n) * (2 * run.g[n] - 1) for n in range(upto + 1)])


def c_from_deltas(deltas: DeltaSequence) -> CSequence:
    d = deltas.delta
    b = backend_of(d[0])
    c = [one(b)]
    for n in range(1, len(d) + 1):
        ratio = 1 + _sign(n) * d[n - 1]
        if not ratio > 0:
            raise DegenerateC(f"c_{n + 1}/c_{n} = {ratio} is not positive")
        c.append(c[-1] * ratio)
    return CSequence(c)


def _alternating_tails(c: CSequence, eps: EpsilonRule, lo: int, M: int, backend: Backend):
    """T_n = sum_{m=n}^{M} (-1)^{m-n} c_m eps_m for n in [lo, M] (index n -> T[n - lo])."""
    T = [None] * (M - lo + 2)
    T[M - lo + 1] = make(0, backend)
    for m in range(M, lo - 1, -1):
        T[m - lo] = c[m] * make(eps(m), backend) - T[m - lo + 1]
    return T


def _monotone_from(c: CSequence, eps: EpsilonRule, lo: int, M: int, backend: Backend) -> int:
    """Smallest n >= lo such that c_m eps_m is non-increasing on [n, M + 1]."""
    start = M + 1
    prev = c[M + 1] * make(eps(M + 1), backend)
    for m in range(M, lo - 1, -1):
        cur = c[m] * make(eps(m), backend)
        if cur < prev:
            break
        start = m
        prev = cur
    return start


def check_condition_ii(c: CSequence, eps: EpsilonRule, n: int, M: int):
    """(residual, tail_bound) for one index n; tail_bound None if no monotone decay."""
    report = condition_ii(c, eps, [n], M)
    chk = report[0]
    return chk.residual, chk.tail_bound


def condition_ii(c: CSequence, eps: EpsilonRule, indices, M: int,
                 tol: Tolerance = DEFAULT_TOL) -> list:
    indices = sorted(set(indices))
    if not indices:
        return []
    if indices[-1] > M:
        raise ValueError("indices must be <= M")
    if c.last < M + 1:
        raise ValueError(f"c is defined through {c.last}, need {M + 1}")
    b = backend_of(c[1])
    lo = indices[0]
    T = _alternating_tails(c, eps, lo, M, b)
    mono = _monotone_from(c, eps, lo, M, b)
    tail = c[M + 1] * make(eps(M + 1), b)
    if b is Backend.FLOAT:
        # recursive-summation rounding bound: (M - n + 1) u sum |c_m eps_m|
        abs_tail = [0.0] * (M - lo + 2)
        for m in range(M, lo - 1, -1):
            abs_tail[m - lo] = abs_tail[m - lo + 1] + abs(c[m] * eps(m))
    out = []
    for n in indices:
        rhs = _sign(n) * (c[n + 1] - c[n])
        residual = abs(T[n - lo] - rhs)
        tb = tail if n >= mono else None
        if tb is None:
            v = CheckVerdict.INCONCLUSIVE
        else:
            if b is Backend.EXACT:
                slack = 0
            else:
                slack = tol.abs_tol + (M - n + 2) * _UNIT_ROUNDOFF * (abs_tail[n - lo] + abs(rhs))
            v = CheckVerdict.PASS if residual <= tb + slack else CheckVerdict.FAIL
        out.append(ConditionIICheck(n, residual, tb, v))
    return out


def reconstruct_h(c: CSequence, eps: EpsilonRule, M: int) -> ParameterRun:
    """h_0..h_{M-1} from truncated tails of (c, eps)."""
    if any(not x > 0 for x in c.values[:M + 1]):
        raise DegenerateC("c must be positive")
    bad = c.condition_i_violation()
    if bad is not None and bad < M:
        raise ConditionViolation(f"c_{bad + 1} > 2 c_{bad}")
    if c.last < M:
        raise ValueError(f"c is defined through {c.last}, need {M}")
    b = backend_of(c[1])
    T = _alternating_tails(c, eps, 1, M, b)
    h = []
    for n in range(1, M + 1):
        d = T[n - 1] / c[n]  # delta_{n-1}
        h.append((1 + _sign(n - 1) * d) / 2)
    return ParameterRun(h, M - 1, b)


def default_truncation(n: int) -> int:
    return max(10**3, 10 * n)


def parameter_run_for(seq: TermSequence, horizon: int, kind: str = "maximal",
                      lookahead: int | None = None) -> ParameterRun:
    if kind == "minimal":
        run = minimal_parameters(seq, horizon)
        if not run.valid:
            raise RefutedRun(run.first_invalid, run.reason)
        return run
    if kind == "maximal":
        return maximal_parameters(seq, horizon, lookahead=lookahead)
    raise ValueError(f"unknown run kind {kind!r}")


def characterize(seq: TermSequence, indices=range(1, 21), M: int | None = None,
                 kind: str = "maximal", lookahead: int | None = None,
                 tol: Tolerance = DEFAULT_TOL) -> CharacterizationReport:
    """Derive (delta, c) from a parameter run of ``seq`` and check (i), (ii)."""
    indices = list(indices)
    if M is None:
        M = default_truncation(max(indices))
    eps = epsilon_rule_of(seq)
    run = parameter_run_for(seq, M + 1, kind, lookahead)
    c = c_from_deltas(deltas_from_run(run))
    checks = condition_ii(c, eps, indices, M, tol)
    return CharacterizationReport(c.condition_i_ok(), checks, M, kind, c.max(),
                                  {"g0": run.g[0]})
