"""Two-periodic oscillatory chains a = (1/4 - p, 1/4 + q, 1/4 - p, ...).

If the feasibility inequalities

    eps <= 1/4 - p <= gamma (1 - gamma)
    eps <= 1/4 + q <= gamma - gamma / (1 - gamma) * (1/4 - p)

hold, then the minimal parameters stay in [eps, gamma] forever. The
certificate re-checks the base case and the four endpoint bounds of the
induction in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .numeric import Backend, make
from .sequences import PQPeriodic

Q = Fraction(1, 4)


class FeasibilityFailure(ValueError):
    def __init__(self, check: "Check"):
        super().__init__(f"inequality fails: {check.describe()}")
        self.check = check


@dataclass(frozen=True)
class Check:
    name: str
    lhs: Fraction
    relation: str  # "<=" or ">="
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs if self.relation == "<=" else self.lhs >= self.rhs

    def describe(self) -> str:
        return f"{self.name}: {self.lhs} {self.relation} {self.rhs}"

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": _s(self.lhs), "relation": self.relation,
                "rhs": _s(self.rhs), "holds": self.holds}


def _s(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PQConfig:
    p: Fraction
    q: Fraction
    eps: Fraction
    gamma: Fraction

    def __post_init__(self):
        for name in ("p", "q", "eps", "gamma"):
            object.__setattr__(self, name, make(getattr(self, name), Backend.EXACT))
        if not (self.p > 0 and self.q > 0):
            raise ValueError("p and q must be positive")
        if not (0 < self.eps < 1 and 0 < self.gamma < 1):
            raise ValueError("eps and gamma must lie in (0, 1)")
        if not self.eps < self.gamma:
            raise ValueError("eps must be smaller than gamma")

    @property
    def a_odd(self) -> Fraction:
        return Q - self.p

    @property
    def a_even(self) -> Fraction:
        return Q + self.q

    @property
    def even_upper_bound(self) -> Fraction:
        """gamma - gamma / (1 - gamma) * (1/4 - p)."""
        return self.gamma - self.gamma / (1 - self.gamma) * self.a_odd


@dataclass
class IntervalCertificate:
    config: PQConfig
    feasibility: list
    base_case: list
    inductive: list
    g1: Fraction
    g2: Fraction
    witnesses: dict = field(default_factory=dict)

    @property
    def interval(self) -> tuple:
        return (self.config.eps, self.config.gamma)

    @property
    def checks(self) -> list:
        return self.feasibility + self.base_case + self.inductive

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def as_dict(self) -> dict:
        cfg = self.config
        return {
            "p": _s(cfg.p), "q": _s(cfg.q), "eps": _s(cfg.eps), "gamma": _s(cfg.gamma),
            "interval": [_s(cfg.eps), _s(cfg.gamma)],
            "g1": _s(self.g1), "g2": _s(self.g2),
            "witnesses": {k: _s(v) for k, v in self.witnesses.items()},
            "feasibility": [c.as_dict() for c in self.feasibility],
            "base_case": [c.as_dict() for c in self.base_case],
            "inductive": [c.as_dict() for c in self.inductive],
            "holds": self.holds,
        }


def feasibility_checks(cfg: PQConfig) -> list:
    lo, up = cfg.eps, cfg.gamma
    return [
        Check("eps <= 1/4 - p", lo, "<=", cfg.a_odd),
        Check("1/4 - p <= gamma(1 - gamma)", cfg.a_odd, "<=", up * (1 - up)),
        Check("eps <= 1/4 + q", lo, "<=", cfg.a_even),
        Check("1/4 + q <= gamma - gamma/(1 - gamma)(1/4 - p)", cfg.a_even, "<=",
              cfg.even_upper_bound),
    ]


def validate_config(cfg: PQConfig) -> bool:
    return all(c.holds for c in feasibility_checks(cfg))


def certify(cfg: PQConfig) -> IntervalCertificate:
    feas = feasibility_checks(cfg)
    for c in feas:
        if not c.holds:
            raise FeasibilityFailure(c)
    lo, up = cfg.eps, cfg.gamma
    A, B = cfg.a_odd, cfg.a_even

    g1 = A
    g2 = B / (1 - g1)
    base = [
        Check("g_1 >= eps", g1, ">=", lo),
        Check("g_1 <= gamma", g1, "<=", up),
        Check("g_2 >= eps", g2, ">=", lo),
        Check("g_2 <= gamma", g2, "<=", up),
    ]

    # x -> A/(1-x) and x -> B/(1-x) increase on [0, 1), so bounds at the
    # interval endpoints bound the whole step.
    odd_lo = A / (1 - lo)
    odd_hi = A / (1 - up)
    even_lo = B / (1 - lo)
    step = [
        Check("g_{2k+1} lower bound (1/4-p)/(1-eps) >= eps", odd_lo, ">=", lo),
        Check("g_{2k+1} upper bound (1/4-p)/(1-gamma) <= gamma", odd_hi, "<=", up),
        Check("g_{2k+2} lower bound (1/4+q)/(1-eps) >= eps", even_lo, ">=", lo),
    ]
    if odd_hi >= 1:
        # no finite upper bound for g_{2k+2}
        step.append(Check("(1/4-p)/(1-gamma) < 1", odd_hi, "<=", Fraction(1)))
        raise FeasibilityFailure(step[-1])
    even_hi = B / (1 - odd_hi)
    step.append(Check("g_{2k+2} upper bound (1/4+q)/(1-(1/4-p)/(1-gamma)) <= gamma",
                      even_hi, "<=", up))
    for c in base + step:
        if not c.holds:
            raise FeasibilityFailure(c)
    witnesses = {
        "even_upper_bound": cfg.even_upper_bound,
        "gamma(1-gamma)": up * (1 - up),
        "odd_lower": odd_lo, "odd_upper": odd_hi,
        "even_lower": even_lo, "even_upper": even_hi,
    }
    return IntervalCertificate(cfg, feas, base, step, g1, g2, witnesses)


def build_sequence(cfg: PQConfig, backend: Backend = Backend.EXACT) -> PQPeriodic:
    if not validate_config(cfg):
        raise FeasibilityFailure(next(c for c in feasibility_checks(cfg) if not c.holds))
    return PQPeriodic(backend=backend, p=cfg.p, q=cfg.q, eps=cfg.eps, gamma=cfg.gamma)


def search_config(p, q, grid: int = 1000) -> PQConfig | None:
    """Find (eps, gamma) certifying (p, q), trying gamma = k / grid.

    The lower inequalities only need eps <= 1/4 - p, so eps is pinned at
    that value; the upper ones are scanned.
    """
    p, q = make(p), make(q)
    A = Q - p
    if not (p > 0 and q > 0 and A > 0):
        return None
    for k in range(1, grid):
        gamma = Fraction(k, grid)
        if not A < gamma:
            continue
        cfg = PQConfig(p, q, A, gamma)
        if validate_config(cfg):
            try:
                certify(cfg)
            except FeasibilityFailure:
                continue
            return cfg
    return None


# -- divergence of sum (a_n - 1/4) -------------------------------------------

def partial_sum(p, q, N: int):
    """S_N = sum_{n<=N} (a_n - 1/4): S_{2k} = k(q-p), S_{2k+1} = k(q-p) - p."""
    k, odd = divmod(N, 2)
    return k * (q - p) - (p if odd else 0)


def divergence_kind(p, q) -> str:
    if q > p:
        return "diverges to +infinity"
    if q < p:
        return "diverges to -infinity"
    return "diverges by oscillation"


def first_violation_index(p, q, bound=Q) -> int | None:
    """First N with S_N > bound, or None if the even partial sums never exceed it."""
    if not q > p:
        return None
    d = make(q) - make(p)
    return 2 * (math.floor(Fraction(bound) / d) + 1)
