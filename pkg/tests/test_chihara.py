import math
from fractions import Fraction

import pytest

from chainseq.chihara import (
    OSC31_SUM_LIMIT,
    Divergence,
    Oscillation,
    abs_sum_example31,
    abs_sum_example31_closed_form,
    chihara_sums,
    classify_oscillation,
    pq_first_violation,
    pq_partial_sum,
)
from chainseq.numeric import Backend
from chainseq.sequences import Constant, EpsilonForm, EpsilonRule, OscExample31, PQPeriodic, osc31_epsilon

F = Fraction
EX32 = PQPeriodic(p=F(11, 50), q=F(6, 25))


def test_classify_examples():
    r = classify_oscillation(OscExample31(), F(1, 4), 100)
    assert (r.count_above, r.count_below, r.count_equal) == (50, 50, 0)
    assert r.classification is Oscillation.OSCILLATORY
    r = classify_oscillation(Constant(a=F(1, 4)), F(1, 4), 10)
    assert (r.count_above, r.count_below, r.count_equal) == (0, 0, 10)
    assert r.classification is Oscillation.INCONCLUSIVE
    r = classify_oscillation(EX32, F(1, 4), 9)
    assert (r.count_above, r.count_below) == (4, 5)
    assert r.classification is Oscillation.OSCILLATORY


def test_counts_partition_horizon():
    for seq in (OscExample31(), EX32, Constant(a=F(1, 5))):
        for N in (1, 7, 40):
            r = classify_oscillation(seq, F(1, 4), N)
            assert r.count_above + r.count_below + r.count_equal == N


def test_no_structural_flag_means_inconclusive():
    # a finite table oscillates on its prefix but carries no structural guarantee
    seq = EpsilonForm(eps=EpsilonRule(table=(F(1, 2),) * 20))
    assert classify_oscillation(seq, F(1, 4), 20).classification is Oscillation.INCONCLUSIVE
    # a closed-form strictly positive rule does
    seq = EpsilonForm(eps=osc31_epsilon())
    assert classify_oscillation(seq, F(1, 4), 20).classification is Oscillation.OSCILLATORY
    # other centres have no structural flag
    assert classify_oscillation(OscExample31(), F(1, 5), 20).classification is Oscillation.INCONCLUSIVE


def test_constant_one_sided():
    assert classify_oscillation(Constant(a=F(1, 5)), F(1, 4), 5).classification is Oscillation.BELOW_ONLY
    assert classify_oscillation(Constant(a=F(3, 10)), F(1, 4), 5).classification is Oscillation.ABOVE_ONLY


def test_equal_count():
    seq = EpsilonForm(eps=EpsilonRule(table=(F(1, 2), F(0), F(1, 3), F(0))))
    r = classify_oscillation(seq, F(1, 4), 4)
    assert (r.count_above, r.count_below, r.count_equal) == (0, 2, 2)


def test_pq_violation():
    rep = chihara_sums(EX32, 26)
    assert rep.partial_sums[25] == F(13, 50)
    assert rep.bound_violated_at == 26
    assert rep.divergence_verdict is Divergence.DIVERGES
    assert rep.divergence_kind == "diverges to +infinity"
    assert not rep.hypothesis_met
    assert pq_first_violation(EX32) == 26
    assert pq_partial_sum(EX32, 26) == F(13, 50)
    assert rep.partial_sums[rep.bound_violated_at - 1] > F(1, 4)
    assert all(s <= F(1, 4) for s in rep.partial_sums[:25])


def test_osc31_sums():
    rep = chihara_sums(OscExample31(), 400)
    assert all(F(-1, 8) < s <= 0 for s in rep.partial_sums)
    assert rep.bound_violated_at is None
    assert rep.divergence_verdict is Divergence.CONVERGES
    assert OSC31_SUM_LIMIT == pytest.approx((2 - math.pi) / 16)


def test_osc31_limit_against_long_partial_sum():
    s = chihara_sums(OscExample31(backend=Backend.FLOAT), 10**4).partial_sums[-1]
    # alternating tail bound: next term 1/(4(4N^2 - 1))
    assert abs(s - OSC31_SUM_LIMIT) < 1 / (4 * (4 * 10**8 - 1))


def test_constant_quarter():
    rep = chihara_sums(Constant(a=F(1, 4)), 50)
    assert set(rep.partial_sums) == {0}
    assert rep.bound_violated_at is None and rep.hypothesis_met


def test_abs_sum_examples():
    assert abs_sum_example31(1) == F(1, 12)
    assert abs_sum_example31(2) == F(1, 10) == F(1, 12) + F(1, 60)
    assert abs_sum_example31_closed_form(1) == F(1, 12)
    assert abs(abs_sum_example31_closed_form(10**6) - F(1, 8)) < F(1, 10**6)


def test_abs_sum_float_backend():
    assert abs_sum_example31(500, Backend.FLOAT) == pytest.approx(float(abs_sum_example31_closed_form(500)), abs=1e-14)


def test_partial_sums_match_termwise_recomputation():
    rep = chihara_sums(OscExample31(), 50)
    acc = F(0)
    for n, s in enumerate(rep.partial_sums, 1):
        acc += OscExample31().term(n) - F(1, 4)
        assert acc == s
