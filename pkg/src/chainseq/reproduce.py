"""Recompute every concrete number of the reference examples and report pass/fail."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import chain, characterization, chihara, fixedpoint, pq_constructor
from .numeric import Backend, approx_eq, make, to_float
from .sequences import Constant, OscExample31, PQPeriodic, osc31_epsilon


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    detail: str = ""
    seconds: float = 0.0


@dataclass
class _Check:
    name: str
    needs: int
    fn: Callable[[Backend, int], tuple]


def _eq(x, expected, backend):
    return approx_eq(x, make(expected, backend))


def _pq_parameters(b, cap):
    seq = PQPeriodic(backend=b, p=Fraction(11, 50), q=Fraction(6, 25))
    run = chain.minimal_parameters(seq, 2)
    ok = _eq(run.g[1], Fraction(3, 100), b) and _eq(run.g[2], Fraction(49, 97), b)
    ok = ok and abs(to_float(run.g[2]) - 0.505) < 5e-4
    return ok, f"g1={run.g[1]}, g2={run.g[2]}"


def _pq_certificate(b, cap):
    cfg = pq_constructor.PQConfig(Fraction(11, 50), Fraction(6, 25), Fraction(1, 50), Fraction(3, 5))
    ok = pq_constructor.validate_config(cfg) and cfg.even_upper_bound == Fraction(555, 1000)
    cert = pq_constructor.certify(cfg)
    ok = ok and cert.holds and cert.g2 == Fraction(49, 97)
    seq = pq_constructor.build_sequence(cfg, b)
    ok = ok and chain.verdict(seq, 10).kind is chain.VerdictKind.CERTIFIED
    return ok, f"upper bound for a_even = {cfg.even_upper_bound}"


def _pq_run_in_interval(b, cap):
    N = min(cap, 10**4)
    seq = PQPeriodic(backend=b, p=Fraction(11, 50), q=Fraction(6, 25))
    run = chain.minimal_parameters(seq, N)
    lo, hi = make(Fraction(1, 50), b), make(Fraction(3, 5), b)
    ok = run.valid and all(lo <= x <= hi for x in run.g[1:])
    return ok, f"n <= {N}"


def _chihara_violation(b, cap):
    seq = PQPeriodic(backend=b, p=Fraction(11, 50), q=Fraction(6, 25))
    rep = chihara.chihara_sums(seq, 26)
    ok = (_eq(rep.partial_sums[25], Fraction(13, 50), b) and rep.bound_violated_at == 26
          and rep.divergence_verdict is chihara.Divergence.DIVERGES)
    ok = ok and all(_eq(rep.partial_sums[2 * k - 1], Fraction(k, 50), b) for k in range(1, 14))
    return ok, f"S_26={rep.partial_sums[25]}, first violation {rep.bound_violated_at}"


def _osc31_parameters(b, cap):
    N = min(cap, 10**3)
    run = chain.closed_form_run31(N, b)
    return chain.verify_parameters(OscExample31(backend=b), run), f"n <= {N}"


def _osc31_abs_sum(b, cap):
    K = min(cap, 10**4)
    seq = OscExample31(backend=b)
    qt = make(Fraction(1, 4), b)
    s = make(0, b)
    for k in range(1, K + 1):
        s += abs(seq.term(k) - qt)
        if not _eq(s, chihara.abs_sum_example31_closed_form(k), b):
            return False, f"mismatch at k={k}"
    gap = abs(to_float(s) - 0.125)
    ok = abs(gap - 1 / (8 * (2 * K + 1))) < 1e-12 and to_float(s) < 0.25
    return ok, f"k <= {K}, |sum - 1/8| = {gap:.3e}"


def _fixed_point(b, cap):
    K = min(cap, 10**3)
    tr = fixedpoint.iterate_f(make(1, b), K, b)
    ok = fixedpoint.is_non_increasing(tr) and all(make(Fraction(1, 2), b) <= x <= 1 for x in tr.x)
    ok = ok and all(_eq(x, Fraction(k + 2, 2 * k + 2), b) for k, x in enumerate(tr.x))
    return ok, f"k <= {K}"


def _limit_witness(b, cap):
    details = []
    ok = True
    for seq in (OscExample31(backend=b), Constant(backend=b, a=Fraction(1, 4))):
        for N in (10**2, 10**3, 10**4):
            if N > cap:
                continue
            d = abs(to_float(chain.limit_witness_g(seq, N)) - 0.5)
            ok = ok and d < 10 / N
            details.append(f"{seq.spec()}@{N}:{d:.2e}")
    return ok, ", ".join(details)


def _constant_criterion(b, cap):
    ok = True
    for a in ("1/10", "1/5", "1/4"):
        ok = ok and chain.verdict(Constant(backend=b, a=a), 100).kind is chain.VerdictKind.CERTIFIED
    for a, idx in (("13/50", 14), ("3/10", 6), ("2/5", 3)):
        v = chain.verdict(Constant(backend=b, a=a), 100)
        ok = ok and v.kind is chain.VerdictKind.REFUTED and v.index == idx
    return ok, "a <= 1/4 certified; 0.26, 0.3, 0.4 refuted at 14, 6, 3"


def _characterization_round_trip(b, cap):
    # lives in float: exact backward recursion over 10^5 steps is impractical
    M = 10**4
    seq = OscExample31(backend=Backend.FLOAT)
    eps = osc31_epsilon(Backend.FLOAT)
    run = chain.maximal_parameters(seq, M + 1)
    c = characterization.c_from_deltas(characterization.deltas_from_run(run))
    ok = c.condition_i_violation() is None
    checks = characterization.condition_ii(c, eps, range(1, 21), M)
    ok = ok and all(ch.verdict is characterization.CheckVerdict.PASS for ch in checks)
    h = characterization.reconstruct_h(c, eps, M)
    err = max(abs(h.g[n] - run.g[n]) for n in range(101))
    ok = ok and err < 1e-8
    worst = max(ch.residual for ch in checks)
    return ok, f"max residual {worst:.2e}, tail {checks[0].tail_bound:.2e}, |h - g| {err:.2e}"


CHECKS = [
    _Check("p-q minimal run: g1 = 3/100, g2 = 49/97", 2, _pq_parameters),
    _Check("p-q certificate (0.22, 0.24, 0.02, 0.6), bound 0.555", 2, _pq_certificate),
    _Check("p-q minimal run stays in [1/50, 3/5] for n <= 10^4", 10**4, _pq_run_in_interval),
    _Check("partial sums S_2k = k/50, violation at N = 26", 26, _chihara_violation),
    _Check("osc31 closed-form parameters reproduce a_n", 10**3, _osc31_parameters),
    _Check("osc31 absolute sum (1/8)(1 - 1/(2k+1))", 10**4, _osc31_abs_sum),
    _Check("f^k(1) = (k+2)/(2k+2), non-increasing in [1/2, 1]", 10**3, _fixed_point),
    _Check("|g_N - 1/2| < 10/N when a_n -> 1/4", 10**2, _limit_witness),
    _Check("constant a is a chain iff a <= 1/4", 14, _constant_criterion),
    _Check("c_n characterisation round trip (float)", 10**4, _characterization_round_trip),
]


def run_checks(backend: Backend = Backend.EXACT, horizon: int | None = None) -> list:
    cap = horizon if horizon is not None else 10**9
    out = []
    for chk in CHECKS:
        if chk.needs > cap:
            out.append(CheckResult(chk.name, "skipped", f"needs horizon {chk.needs}"))
            continue
        t = time.perf_counter()
        try:
            ok, detail = chk.fn(backend, cap)
        except Exception as e:  # a crash is a failed check, not a crashed driver
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(chk.name, "pass" if ok else "fail", detail,
                               time.perf_counter() - t))
    return out
