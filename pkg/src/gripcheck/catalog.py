"""The shipped soft-gripper requirement catalog.

The same content ships as ``data/catalog.gspec``; tests check that parsing the
file reproduces :func:`builtin_catalog` exactly.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .model import (
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
from .units import Quantity

Q = Quantity.of

CATALOG_NAME = "soft-gripper-pick-and-place"

CATALOG_METADATA = (
    ("standards", "ISO 14539:2000; ISO 10218-1/10218-2; ISO/TS 15066"),
    ("regulation", "SOTEC review (structural, organisational, technological, epistemic, cultural) is a human activity"),
    ("success_convention", "95% success, 5% failure"),
    ("degradation_increase", "absolute percentage points (relative reading not applied)"),
)

OBS = VerificationMethod(Method.OBSERVATION, "during operation")
UNIT = VerificationMethod(Method.UNIT_TEST)
EDGE = VerificationMethod(Method.EDGE_CASE_TEST)
LIFE = VerificationMethod(Method.LIFE_CYCLE_TEST)
REPEAT = VerificationMethod(Method.REPEATED_TEST)
FUNC = VerificationMethod(Method.FUNCTIONAL_TEST)
REVIEW = VerificationMethod(Method.OBSERVATION, "human review")


def _measure(detail: str) -> VerificationMethod:
    return VerificationMethod(Method.MEASUREMENT, detail)


def _hold(rid: str, text: str, items=(), width_max=None) -> Requirement:
    return Requirement(
        rid, Category.ADAPTABILITY, Kind.HOLD_DURATION,
        Params(duration=Q(10, "s"), fraction=Q(95, "%")),
        (REPEAT, OBS),
        Applicability(items=tuple(items), width_max=width_max),
        text,
    )


def _manual(rid: str, text: str) -> Requirement:
    return Requirement(rid, Category.ETHICS, Kind.MANUAL, Params(), (REVIEW,), Applicability(), text)


HOUR_WINDOWS = ((Q(0, "h"), Q(10, "h")), (Q(90, "h"), Q(100, "h")))


def _requirements() -> list[Requirement]:
    P, R, S = Category.PREDICTABILITY, Category.RELIABILITY, Category.SAFETY
    flow_range = SignalBound("flow", Q(2, "L/min"), Q(3.2, "L/min"), interval=True)
    return [
        Requirement("RQ1.1", P, Kind.EVENT_RESPONSE,
                    Params((SignalBound("curvature", lo=Q(0, "1/m")),), trigger="pump_on", window=Q(2, "s")),
                    (OBS,), Applicability(),
                    "Fingers curl when the pump is switched on."),
        Requirement("RQ1.1r", P, Kind.PROPORTIONALITY,
                    Params((SignalBound("curvature", Q(10, "1/m"), Q(10, "1/m"), True, Q(2, "%")),)),
                    (UNIT,), Applicability(),
                    "Refinement of RQ1.1: at full inflation the finger bend radius is 10 cm, to within 2%."),
        Requirement("RQ1.2", P, Kind.EVENT_RESPONSE,
                    Params((SignalBound("curvature", hi=Q(5, "%")),), trigger="pump_off", window=Q(2, "s")),
                    (OBS,), Applicability(),
                    "Fingers flatten again when the pump is switched off."),
        Requirement("RQ1.3", P, Kind.PROPORTIONALITY,
                    Params((SignalBound("curvature", tolerance=Q(5, "%")),)),
                    (UNIT,), Applicability(),
                    "Finger curvature tracks internal pressure linearly."),
        Requirement("RQ1.4", P, Kind.SUCCESS_RATE,
                    Params((SignalBound("placed"),), fraction=Q(95, "%")),
                    (OBS,), Applicability(),
                    "Grasp, transport and placement succeed in at least 95% of trials."),
        Requirement("RQ1.5", P, Kind.RANGE,
                    Params((SignalBound("pressure", Q(3, "psi"), Q(4, "psi"), True),)),
                    (UNIT,), Applicability(phases=("translation",)),
                    "Operating inflation pressure stays within 3 to 4 psi."),
        Requirement("RQ1.6", P, Kind.RANGE,
                    Params((flow_range,)),
                    (UNIT,), Applicability(phases=("inflation",)),
                    "Inflation flow rate stays within 2 to 3.2 L/min."),
        Requirement("RQ2.1", R, Kind.SUCCESS_RATE,
                    Params((SignalBound("undamaged"),), fraction=Q(95, "%")),
                    (OBS,), Applicability(),
                    "Held items are not damaged."),
        Requirement("RQ2.2", R, Kind.HOLD_DURATION,
                    Params(duration=Q(10, "s"), fraction=Q(95, "%")),
                    (OBS,), Applicability(),
                    "A gripped item is held for 10 s or more without being dropped in 95% of trials."),
        Requirement("RQ2.3", R, Kind.THRESHOLD,
                    Params((SignalBound("velocity", hi=Q(0.03, "m/s")),
                            SignalBound("acceleration", hi=Q(0.15, "m/s2"))), fraction=Q(95, "%")),
                    (EDGE,), Applicability(phases=("translation",)),
                    "Grasp is kept through transport at no more than 0.03 m/s and 0.15 m/s2."),
        Requirement("RQ2.4", R, Kind.SUCCESS_RATE,
                    Params((SignalBound("grasped"), flow_range), fraction=Q(95, "%")),
                    (OBS,), Applicability(phases=("inflation",)),
                    "Grasping succeeds when inflating at 2 to 3.2 L/min."),
        Requirement("RQ2.5", R, Kind.TREND,
                    Params((SignalBound("dropped", hi=Q(5, "%")),), windows=HOUR_WINDOWS),
                    (LIFE,), Applicability(),
                    "Drop rate grows by no more than 5 points over 100 operating hours."),
        Requirement("RQ2.6", R, Kind.TREND,
                    Params((SignalBound("damaged", hi=Q(5, "%")),), windows=HOUR_WINDOWS),
                    (LIFE,), Applicability(),
                    "Damage rate grows by no more than 5 points over 100 operating hours."),
        _hold("RQ3.1", "Items up to 95% of the finger opening width are held for 10 s in 95% of trials.",
              width_max=Q(95, "%")),
        _hold("RQ3.2", "Regular shapes (sphere, cube, cone, pyramid, cylinder) are held for 10 s in 95% of trials.",
              items=("sphere", "cube", "cone", "pyramid", "cylinder")),
        _hold("RQ3.3", "Irregular and soft-fragile items are held for 10 s in 95% of trials.",
              items=("irregular", "soft_fragile")),
        _hold("RQ3.4", "Holding for 10 s succeeds in 95% of trials at every tested item orientation.",
              items=("orientation",)),
        Requirement("RQ4.1", S, Kind.NO_COLLISION,
                    Params((SignalBound("item_velocity", hi=Q(0, "m/s")),)),
                    (_measure("vision camera"), OBS, VerificationMethod(Method.BY_DESIGN, "item starts at rest")),
                    Applicability(),
                    "The item is at rest until the gripper touches it."),
        Requirement("RQ4.2", S, Kind.NO_COLLISION,
                    Params((SignalBound("collision"),)),
                    (_measure("force torque sensor"),), Applicability(),
                    "The gripping system does not collide with the item."),
        Requirement("RQ4.2r", S, Kind.NO_COLLISION,
                    Params((SignalBound("body_position"),)),
                    (_measure("joint distance monitoring"),), Applicability(),
                    "Refinement of RQ4.2: no non-finger body point ever occupies the item's position."),
        Requirement("RQ4.3", S, Kind.NO_COLLISION,
                    Params((SignalBound("contact_part"),)),
                    (_measure("force torque sensor and vision camera"),), Applicability(),
                    "Only the fingers touch the item."),
        Requirement("RQ4.4", S, Kind.THRESHOLD,
                    Params((SignalBound("grip_force", hi=Q(2, "N")),)),
                    (FUNC,), Applicability(items=("hard_fragile",)),
                    "Hard-fragile items (bulb, egg) see at most 2 N of grip force."),
        Requirement("RQ4.5", S, Kind.THRESHOLD,
                    Params((SignalBound("fingertip_displacement", hi=Q(3, "mm")),)),
                    (_measure("displacement sensor"),), Applicability(items=("soft_fragile/cake",)),
                    "Cake-like soft-fragile items see at most 3 mm of fingertip displacement."),
        Requirement("RQ4.6", S, Kind.THRESHOLD,
                    Params((SignalBound("grip_force", hi=Q(1, "N")),
                            SignalBound("fingertip_displacement", hi=Q(1, "mm")))),
                    (FUNC, _measure("displacement sensor")), Applicability(items=("soft_fragile/berry",)),
                    "Berry-like soft-fragile items see at most 1 N and 1 mm."),
        _manual("RQ5.1", "The gripper is environmentally sustainable."),
        _manual("RQ5.2", "The gripper does not distress the people working near it."),
        _manual("RQ5.3", "The gripper does not exploit the familiarity people feel toward hand-like devices."),
        _manual("RQ5.4", "Deploying the gripper treats current workers fairly."),
    ]


@lru_cache(maxsize=1)
def builtin_catalog() -> SpecificationDoc:
    return SpecificationDoc(CATALOG_NAME, tuple(_requirements()), CATALOG_METADATA)


def catalog_text() -> str:
    """The shipped ``catalog.gspec`` file contents."""
    return resources.files("gripcheck").joinpath("data/catalog.gspec").read_text("utf-8")
