"""Physical quantities with SI storage.

A :class:`Quantity` keeps its SI value for computation and remembers the
literal it was written as, so documents print back the way they were authored
(``3 psi`` stays ``3 psi`` instead of ``20684.271 Pa``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

PSI_TO_PA = 6894.757
LPM_TO_M3S = 1.0 / 60000.0

# SI unit names used internally.
PA = "Pa"
M = "m"
S = "s"
N = "N"
M3_PER_S = "m3_per_s"
M_PER_S = "m_per_s"
M_PER_S2 = "m_per_s2"
PER_M = "1_per_m"
DIMENSIONLESS = "dimensionless"

SI_UNITS = (PA, M, S, N, M3_PER_S, M_PER_S, M_PER_S2, PER_M, DIMENSIONLESS)

# symbol -> (SI unit, factor to SI)
SYMBOLS: dict[str, tuple[str, float]] = {
    "Pa": (PA, 1.0),
    "kPa": (PA, 1000.0),
    "psi": (PA, PSI_TO_PA),
    "m": (M, 1.0),
    "cm": (M, 0.01),
    "mm": (M, 0.001),
    "s": (S, 1.0),
    "ms": (S, 0.001),
    "min": (S, 60.0),
    "h": (S, 3600.0),
    "N": (N, 1.0),
    "m3/s": (M3_PER_S, 1.0),
    "L/min": (M3_PER_S, LPM_TO_M3S),
    "m/s": (M_PER_S, 1.0),
    "m/s2": (M_PER_S2, 1.0),
    "1/m": (PER_M, 1.0),
    "%": (DIMENSIONLESS, 0.01),
    "1": (DIMENSIONLESS, 1.0),
}

# Sub-unit symbols convert by dividing by an exact integer, so "95 %" is exactly 0.95.
_DIVISORS = {"cm": 100.0, "mm": 1000.0, "ms": 1000.0, "L/min": 60000.0, "%": 100.0}

# Symbol used when a quantity is built from an SI value directly.
_SI_SYMBOL = {PA: "Pa", M: "m", S: "s", N: "N", M3_PER_S: "m3/s", M_PER_S: "m/s",
              M_PER_S2: "m/s2", PER_M: "1/m", DIMENSIONLESS: "1"}


class UnitError(ValueError):
    pass


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: str
    magnitude: float
    symbol: str

    def __post_init__(self):
        if not math.isfinite(self.value) or not math.isfinite(self.magnitude):
            raise UnitError(f"non-finite quantity {self.magnitude} {self.symbol}")
        if self.unit not in SI_UNITS:
            raise UnitError(f"unknown SI unit {self.unit!r}")

    @classmethod
    def of(cls, magnitude: float, symbol: str) -> "Quantity":
        try:
            unit, factor = SYMBOLS[symbol]
        except KeyError:
            raise UnitError(f"unknown unit {symbol!r}") from None
        magnitude = float(magnitude)
        divisor = _DIVISORS.get(symbol)
        value = magnitude / divisor if divisor else magnitude * factor
        return cls(value, unit, magnitude, symbol)

    @classmethod
    def si(cls, value: float, unit: str) -> "Quantity":
        if unit not in _SI_SYMBOL:
            raise UnitError(f"unknown SI unit {unit!r}")
        return cls(float(value), unit, float(value), _SI_SYMBOL[unit])

    def to(self, symbol: str) -> float:
        unit, factor = SYMBOLS[symbol]
        if unit != self.unit:
            raise UnitError(f"cannot express {self.unit} in {symbol}")
        divisor = _DIVISORS.get(symbol)
        return self.value * divisor if divisor else self.value / factor

    def __str__(self) -> str:
        return f"{format_number(self.magnitude)} {self.symbol}"


def format_number(x: float) -> str:
    """Shortest text that parses back to exactly ``x``."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def psi_to_pa(psi: float) -> float:
    return psi * PSI_TO_PA


def pa_to_psi(pa: float) -> float:
    return pa / PSI_TO_PA


def lpm_to_m3s(lpm: float) -> float:
    return lpm * LPM_TO_M3S


def m3s_to_lpm(m3s: float) -> float:
    return m3s / LPM_TO_M3S
