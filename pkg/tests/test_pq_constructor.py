from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from chainseq.chain import minimal_parameters
from chainseq.chihara import chihara_sums, classify_oscillation
from chainseq.pq_constructor import (
    FeasibilityFailure,
    PQConfig,
    build_sequence,
    certify,
    divergence_kind,
    first_violation_index,
    partial_sum,
    search_config,
    validate_config,
)

F = Fraction
EX32 = PQConfig(F(11, 50), F(6, 25), F(1, 50), F(3, 5))


def test_validate_examples():
    assert validate_config(EX32)
    assert EX32.even_upper_bound == F(555, 1000)
    assert EX32.gamma * (1 - EX32.gamma) == F(24, 100)
    assert not validate_config(PQConfig(F(6, 25), F(6, 25), F(1, 50), F(3, 5)))
    sym = PQConfig(F(1, 5), F(1, 5), F(1, 50), F(3, 5))
    assert validate_config(sym)
    assert sym.even_upper_bound == F(525, 1000)


def test_config_field_invariants():
    with pytest.raises(ValueError):
        PQConfig(F(1, 5), F(1, 5), F(3, 5), F(1, 50))
    with pytest.raises(ValueError):
        PQConfig(F(1, 5), 0, F(1, 50), F(3, 5))
    with pytest.raises(ValueError):
        PQConfig(F(1, 5), F(1, 5), F(1, 50), F(1))


def test_certificate_example_values():
    cert = certify(EX32)
    assert cert.holds
    assert (cert.g1, cert.g2) == (F(3, 100), F(49, 97))
    w = cert.witnesses
    assert w["odd_lower"] == F(3, 98)
    assert w["odd_upper"] == F(3, 40)
    assert w["even_lower"] == F(1, 2)
    # 0.49 / (1 - 0.03/0.4) = 0.49 / 0.925
    assert w["even_upper"] == F(98, 185) == F(49, 100) / F(925, 1000)
    assert cert.interval == (F(1, 50), F(3, 5))
    assert len(cert.feasibility) == 4 and len(cert.inductive) == 4


def test_infeasible_names_inequality():
    with pytest.raises(FeasibilityFailure) as exc:
        certify(PQConfig(F(3, 10), F(1, 5), F(1, 50), F(3, 5)))
    assert exc.value.check.name == "eps <= 1/4 - p"
    with pytest.raises(FeasibilityFailure) as exc:
        certify(PQConfig(F(1, 5), F(7, 10), F(1, 50), F(3, 5)))
    assert "1/4 + q <=" in exc.value.check.name


def test_symmetric_config_certifies():
    assert certify(PQConfig(F(1, 5), F(1, 5), F(1, 50), F(3, 5))).holds


def test_build_sequence():
    seq = build_sequence(EX32)
    assert [seq.term(n) for n in range(1, 5)] == [F(3, 100), F(49, 100)] * 2
    assert all(seq.term(n) == seq.term(n + 2) for n in range(1, 50))
    sym = build_sequence(PQConfig(F(1, 5), F(1, 5), F(1, 50), F(3, 5)))
    assert all(sym.term(n) - F(1, 4) == -(sym.term(n + 1) - F(1, 4)) for n in range(1, 20))


def test_certificate_soundness_long_run():
    run = minimal_parameters(build_sequence(EX32), 10**4)
    assert run.valid
    assert all(F(1, 50) <= g <= F(3, 5) for g in run.g[1:])


unit = st.fractions(min_value=0, max_value=1, max_denominator=97)


@st.composite
def feasible_configs(draw):
    """Draw a point inside the feasibility region, endpoints included."""
    gamma = draw(st.fractions(min_value=F(1, 4), max_value=F(19, 20), max_denominator=97))
    a_odd = gamma * (1 - gamma) * draw(unit.filter(lambda t: t > 0))
    assume(a_odd < F(1, 4))
    eps = a_odd * draw(unit.filter(lambda t: t > 0))
    assume(eps < gamma)
    top = gamma - gamma / (1 - gamma) * a_odd
    assume(top > F(1, 4))
    a_even = F(1, 4) + (top - F(1, 4)) * draw(unit.filter(lambda t: t > 0))
    return PQConfig(F(1, 4) - a_odd, a_even - F(1, 4), eps, gamma)


@given(feasible_configs())
@settings(max_examples=300, deadline=None)
def test_certificate_soundness_random(cfg):
    assert validate_config(cfg)
    cert = certify(cfg)
    run = minimal_parameters(build_sequence(cfg), 200)
    assert run.valid
    lo, hi = cert.interval
    assert all(lo <= g <= hi for g in run.g[1:])


@pytest.mark.parametrize("N", [1, 2, 9, 10, 101])
def test_oscillation_counts(N):
    rep = classify_oscillation(build_sequence(EX32), F(1, 4), N)
    assert (rep.count_above, rep.count_below) == (N // 2, (N + 1) // 2)


def test_partial_sums_closed_form_vs_scan():
    for p, q in [(F(11, 50), F(6, 25)), (F(1, 5), F(1, 5)), (F(1, 5), F(1, 10))]:
        cfg = search_config(p, q)
        assert cfg is not None
        sums = chihara_sums(build_sequence(cfg), 60).partial_sums
        for N in range(1, 61):
            assert sums[N - 1] == partial_sum(p, q, N)
    assert partial_sum(F(11, 50), F(6, 25), 26) == F(13, 50)


def test_divergence_kinds():
    assert divergence_kind(F(1, 5), F(6, 25)) == "diverges to +infinity"
    assert divergence_kind(F(1, 5), F(1, 10)) == "diverges to -infinity"
    assert divergence_kind(F(1, 5), F(1, 5)) == "diverges by oscillation"


@given(st.fractions(min_value=F(1, 100), max_value=F(24, 100), max_denominator=100),
       st.fractions(min_value=F(1, 200), max_value=F(1, 5), max_denominator=200))
@settings(max_examples=100, deadline=None)
def test_first_violation_formula_matches_scan(p, d):
    q = p + d
    N = first_violation_index(p, q)
    scan = next(n for n in range(1, 10**4) if partial_sum(p, q, n) > F(1, 4))
    assert N == scan


def test_no_violation_when_q_not_above_p():
    assert first_violation_index(F(1, 5), F(1, 5)) is None
    assert first_violation_index(F(1, 5), F(1, 10)) is None


def test_search_config():
    cfg = search_config(F(11, 50), F(6, 25))
    assert cfg is not None and certify(cfg).holds
    assert search_config(F(1, 5), F(9, 10)) is None
