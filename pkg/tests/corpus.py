"""Random valid requirement documents and varied renderings of them."""

from __future__ import annotations

import random

from gripcheck.dsl import print_spec
from gripcheck.model import (
    Applicability,
    Category,
    Kind,
    Method,
    Params,
    Requirement,
    SignalBound,
    SpecificationDoc,
    VerificationMethod,
)
from gripcheck.units import Quantity

SYMBOLS_FOR = {
    "pressure": ["Pa", "kPa", "psi"],
    "flow": ["m3/s", "L/min"],
    "curvature": ["1/m"],
    "grip_force": ["N"],
    "fingertip_displacement": ["m", "cm", "mm"],
    "velocity": ["m/s"],
    "acceleration": ["m/s2"],
    "item_velocity": ["m/s"],
}
OUTCOMES = ["placed", "grasped", "undamaged", "dropped", "damaged"]
PHASES = ["pre-grasp", "ascension", "translation", "descension", "inflation"]
SELECTORS = ["soft_fragile", "hard_fragile", "soft_fragile/berry", "cube", "sphere", "egg", "orientation"]
DETAILS = ["", "", "during operation", "vision camera", 'quoted "detail"', "tab\tand unicode é"]


def _mag(rng: random.Random) -> float:
    return rng.choice([0.0, 1.0, 2.5, 10.0, 0.03, 95.0, round(rng.uniform(0, 50), rng.randint(0, 4))])


def _q(rng, symbols) -> Quantity:
    return Quantity.of(_mag(rng), rng.choice(symbols))


def _interval(rng, symbols):
    sym = rng.choice(symbols)
    a, b = sorted([_mag(rng), _mag(rng)])
    return Quantity.of(a, sym), Quantity.of(b, sym)


def _bound(rng, signal=None, style=None) -> SignalBound:
    signal = signal or rng.choice(sorted(SYMBOLS_FOR))
    syms = SYMBOLS_FOR[signal]
    style = style or rng.choice(["in", "max", "min", "none"])
    tol = Quantity.of(rng.choice([1.0, 2.0, 5.0]), "%") if rng.random() < 0.3 else None
    if style == "in":
        lo, hi = _interval(rng, syms)
        return SignalBound(signal, lo, hi, True, tol)
    if style == "max":
        return SignalBound(signal, None, _q(rng, syms), False, tol)
    if style == "min":
        return SignalBound(signal, _q(rng, syms), None, False, tol)
    return SignalBound(signal, None, None, False, tol)


def random_requirement(rng: random.Random, rid: str) -> Requirement:
    kind = rng.choice(list(Kind))
    bounds, fraction, duration, trigger, window, windows = [], None, None, None, None, []
    if kind is Kind.RANGE:
        bounds.append(_bound(rng, style="in"))
    elif kind is Kind.THRESHOLD:
        bounds.append(_bound(rng, style=rng.choice(["max", "min"])))
    elif kind is Kind.EVENT_RESPONSE:
        trigger = rng.choice(["pump_on", "pump_off"])
        window = Quantity.of(rng.choice([0.5, 2.0, 3.0]), rng.choice(["s", "ms"]))
        bounds.append(_bound(rng, "curvature", rng.choice(["max", "min"])))
    elif kind is Kind.HOLD_DURATION:
        duration = Quantity.of(rng.choice([1.0, 10.0, 0.5]), rng.choice(["s", "min"]))
    elif kind is Kind.SUCCESS_RATE:
        bounds.append(SignalBound(rng.choice(OUTCOMES)))
    elif kind is Kind.TREND:
        bounds.append(SignalBound(rng.choice(OUTCOMES), None, Quantity.of(5.0, "%")))
        windows = [(Quantity.of(0.0, "h"), Quantity.of(10.0, "h")), (Quantity.of(90.0, "h"), Quantity.of(100.0, "h"))]
    elif kind in (Kind.PROPORTIONALITY, Kind.NO_COLLISION):
        bounds.append(_bound(rng))
    if kind is not Kind.MANUAL:
        while rng.random() < 0.3:
            bounds.append(_bound(rng))
        if kind in (Kind.SUCCESS_RATE, Kind.HOLD_DURATION) or rng.random() < 0.2:
            fraction = Quantity.of(rng.choice([95.0, 90.0, 99.5]), "%")
    if kind is Kind.SUCCESS_RATE and fraction is None:
        fraction = Quantity.of(95.0, "%")
    phases = tuple(rng.sample(PHASES, rng.randint(0, 2))) if kind is not Kind.MANUAL else ()
    items = tuple(rng.sample(SELECTORS, rng.randint(0, 2))) if kind is not Kind.MANUAL else ()
    width = Quantity.of(95.0, "%") if kind is not Kind.MANUAL and rng.random() < 0.2 else None
    methods = tuple(VerificationMethod(rng.choice(list(Method)), rng.choice(DETAILS))
                    for _ in range(rng.randint(1, 3)))
    text = rng.choice(["", "The gripper shall hold.", "Line with \"quotes\" and \\ backslash", "naïve ✓"])
    return Requirement(rid, rng.choice(list(Category)), kind,
                       Params(tuple(bounds), fraction, duration, trigger, window, tuple(windows)),
                       methods, Applicability(phases, items, width), text)


def random_doc(seed: int) -> SpecificationDoc:
    rng = random.Random(seed)
    reqs = [random_requirement(rng, f"R{seed}.{i}") for i in range(rng.randint(1, 8))]
    meta = tuple((f"key{i}", rng.choice(["a value", "x = y", "95%"])) for i in range(rng.randint(0, 2)))
    return SpecificationDoc(f"doc-{seed}", tuple(reqs), meta)


def restyle(text: str, seed: int) -> str:
    """Same document, different layout: comments, blank lines, indentation, dropped ``end``."""
    rng = random.Random(seed)
    out = []
    for line in text.splitlines():
        if line.strip() == "end" and rng.random() < 0.5:
            continue
        if line.startswith("  ") and rng.random() < 0.3:
            line = "\t" + line.strip() + "   "
        if rng.random() < 0.15:
            out.append("# a comment line")
        if rng.random() < 0.1 and not line.startswith("#") and '"' not in line:
            line += "  # trailing comment"
        out.append(line)
        if rng.random() < 0.1:
            out.append("")
    return "\n".join(out) + "\n"


def corpus_text(seed: int) -> str:
    doc = random_doc(seed)
    text = print_spec(doc)
    return text if seed % 2 == 0 else restyle(text, seed)
