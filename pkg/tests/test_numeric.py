from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chainseq.numeric import (
    Backend,
    BackendMismatch,
    DenominatorOverflow,
    Tolerance,
    approx_eq,
    format_scalar,
    guard_denominator,
    make,
    max_denominator_bits,
    parse_scalar,
    to_float,
)

fracs = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**6)


def test_approx_eq_examples():
    assert approx_eq(Fraction(1, 3), Fraction(1, 3))
    assert not approx_eq(Fraction(49, 97), Fraction(50, 97))
    assert approx_eq(0.5051546391752577, float(Fraction(49, 97)))


def test_exact_ignores_tolerance():
    loose = Tolerance(1e-3, 1e-3)
    assert not approx_eq(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**9), loose)


def test_float_tolerance_is_relative_for_large_values():
    assert approx_eq(1e6, 1e6 + 1e-7)
    assert not approx_eq(1.0, 1.0 + 1e-9)


def test_mixed_backends_rejected():
    with pytest.raises(BackendMismatch):
        approx_eq(Fraction(1, 4), 0.25)


def test_to_float():
    assert to_float(Fraction(1, 4)) == 0.25
    assert to_float(Fraction(49, 97)) == pytest.approx(0.50515463917, abs=1e-11)
    assert to_float(Fraction(0)) == 0.0
    assert to_float(0.125) == 0.125


@pytest.mark.parametrize("bad", [0.0, -1e-12, 2e-3])
def test_tolerance_bounds(bad):
    with pytest.raises(ValueError):
        Tolerance(abs_tol=bad)


def test_canonical_form():
    x = Fraction(2, 4)
    assert (x.numerator, x.denominator) == (1, 2)
    assert Fraction(3, -6).denominator > 0


def test_decimal_goes_exact():
    assert make(0.22) == Fraction(11, 50)
    assert parse_scalar("0.24") == Fraction(6, 25)
    assert parse_scalar("11/50") == Fraction(11, 50)
    assert parse_scalar("1/4", Backend.FLOAT) == 0.25
    with pytest.raises(ValueError):
        parse_scalar("1/0")
    with pytest.raises(ValueError):
        parse_scalar("abc")


@given(fracs)
def test_serialisation_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_serialisation_round_trip(x):
    assert float(format_scalar(x)) == x


@given(fracs, fracs, fracs)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(fracs, fracs.filter(lambda x: x != 0))
def test_division_invertible(a, b):
    assert (a / b) * b == a


def test_denominator_guard(monkeypatch):
    guard_denominator(Fraction(1, 2**100), budget=101)
    with pytest.raises(DenominatorOverflow):
        guard_denominator(Fraction(1, 2**100), budget=64)
    guard_denominator(1e-300, budget=1)  # floats are never guarded
    monkeypatch.setenv("CHAINSEQ_MAX_DENOM_BITS", "8")
    assert max_denominator_bits() == 8
    with pytest.raises(DenominatorOverflow):
        guard_denominator(Fraction(1, 1000))
