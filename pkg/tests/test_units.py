import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gripcheck.units import (
    SYMBOLS,
    Quantity,
    UnitError,
    format_number,
    lpm_to_m3s,
    m3s_to_lpm,
    pa_to_psi,
    psi_to_pa,
)


@pytest.mark.parametrize("mag,symbol,si", [
    (3, "psi", 20684.271),
    (2, "L/min", 2 / 60000),
    (3, "mm", 0.003),
    (10, "min", 600.0),
    (90, "h", 324000.0),
    (95, "%", 0.95),
    (4, "kPa", 4000.0),
])
def test_conversion_to_si(mag, symbol, si):
    assert Quantity.of(mag, symbol).value == pytest.approx(si, rel=1e-12)


def test_literal_is_remembered():
    q = Quantity.of(3.5, "psi")
    assert str(q) == "3.5 psi"
    assert q.to("psi") == pytest.approx(3.5)
    assert q.to("Pa") == pytest.approx(3.5 * 6894.757)


def test_unknown_symbol_and_cross_dimension():
    with pytest.raises(UnitError):
        Quantity.of(1, "furlong")
    with pytest.raises(UnitError):
        Quantity.of(1, "psi").to("m")
    with pytest.raises(UnitError):
        Quantity.si(1, "parsec")


def test_non_finite_rejected():
    with pytest.raises(UnitError):
        Quantity.of(float("nan"), "s")
    with pytest.raises(UnitError):
        Quantity.of(float("inf"), "N")


def test_si_constructor_uses_canonical_symbol():
    assert str(Quantity.si(0.5, "m_per_s")) == "0.5 m/s"


@given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False))
def test_format_number_round_trips(x):
    assert float(format_number(x)) == x


@given(st.floats(min_value=0, max_value=1e6, allow_nan=False), st.sampled_from(sorted(SYMBOLS)))
def test_to_inverts_of(mag, symbol):
    assert Quantity.of(mag, symbol).to(symbol) == pytest.approx(mag, rel=1e-12, abs=1e-300)


@given(st.floats(min_value=0, max_value=100, allow_nan=False))
def test_helper_round_trips(x):
    assert pa_to_psi(psi_to_pa(x)) == pytest.approx(x, rel=1e-12, abs=1e-300)
    assert m3s_to_lpm(lpm_to_m3s(x)) == pytest.approx(x, rel=1e-12, abs=1e-300)
    assert math.isclose(lpm_to_m3s(60), 1e-3)


def test_percent_and_sub_units_are_exact():
    assert Quantity.of(95, "%").value == 0.95
    assert Quantity.of(95, "%").to("%") == 95.0
    assert Quantity.of(3, "mm").value == 0.003
    assert Quantity.of(3.2, "L/min").to("L/min") == 3.2
