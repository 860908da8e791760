"""Domain types for requirements, items and specification documents."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .units import DIMENSIONLESS, M, M3_PER_S, M_PER_S, M_PER_S2, N, PA, PER_M, S, Quantity


class ItemClass(str, enum.Enum):
    SOFT_FRAGILE = "soft_fragile"
    SOFT_NON_FRAGILE = "soft_non_fragile"
    HARD_FRAGILE = "hard_fragile"
    HARD_NON_FRAGILE = "hard_non_fragile"


class Shape(str, enum.Enum):
    SPHERE = "sphere"
    CUBE = "cube"
    CONE = "cone"
    PYRAMID = "pyramid"
    CYLINDER = "cylinder"
    IRREGULAR = "irregular"


REGULAR_SHAPES = frozenset(s for s in Shape if s is not Shape.IRREGULAR)

# Fragility limits per (class, profile). Profiles split soft-fragile goods into
# cake-like (displacement limited) and berry-like (force and displacement).
FRAGILITY_LIMITS: dict[tuple[ItemClass, Optional[str]], tuple[Optional[float], Optional[float]]] = {
    (ItemClass.HARD_FRAGILE, None): (2.0, None),
    (ItemClass.SOFT_FRAGILE, "cake"): (None, 0.003),
    (ItemClass.SOFT_FRAGILE, "berry"): (1.0, 0.001),
}


@dataclass(frozen=True)
class ItemSpec:
    """An item to pick. All fields are SI (m, kg, rad, N)."""

    name: str
    item_class: ItemClass
    shape: Shape
    width_m: float
    mass_kg: float
    orientation_rad: float = 0.0
    fragility_force_limit_n: Optional[float] = None
    fragility_displacement_limit_m: Optional[float] = None
    profile: Optional[str] = None

    def __post_init__(self):
        if not (self.width_m > 0 and math.isfinite(self.width_m)):
            raise ValueError(f"item width must be positive, got {self.width_m}")
        if not (self.mass_kg > 0 and math.isfinite(self.mass_kg)):
            raise ValueError(f"item mass must be positive, got {self.mass_kg}")
        object.__setattr__(self, "item_class", ItemClass(self.item_class))
        object.__setattr__(self, "shape", Shape(self.shape))

    @classmethod
    def make(cls, name, item_class, shape, width_m, mass_kg, orientation_rad=0.0, profile=None):
        """Build an item with the fragility limits its class/profile implies."""
        item_class = ItemClass(item_class)
        force, disp = FRAGILITY_LIMITS.get((item_class, profile), (None, None))
        return cls(name, item_class, Shape(shape), width_m, mass_kg, orientation_rad,
                   force, disp, profile)

    def with_orientation(self, orientation_rad: float) -> "ItemSpec":
        return ItemSpec(self.name, self.item_class, self.shape, self.width_m, self.mass_kg,
                        orientation_rad, self.fragility_force_limit_n,
                        self.fragility_displacement_limit_m, self.profile)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "class": self.item_class.value,
            "shape": self.shape.value,
            "width_m": self.width_m,
            "mass_kg": self.mass_kg,
            "orientation_rad": self.orientation_rad,
            "fragility_force_limit_n": self.fragility_force_limit_n,
            "fragility_displacement_limit_m": self.fragility_displacement_limit_m,
            "profile": self.profile,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ItemSpec":
        return cls(
            name=d["name"],
            item_class=ItemClass(d["class"]),
            shape=Shape(d["shape"]),
            width_m=float(d["width_m"]),
            mass_kg=float(d["mass_kg"]),
            orientation_rad=float(d.get("orientation_rad", 0.0)),
            fragility_force_limit_n=d.get("fragility_force_limit_n"),
            fragility_displacement_limit_m=d.get("fragility_displacement_limit_m"),
            profile=d.get("profile"),
        )


class Category(str, enum.Enum):
    PREDICTABILITY = "predictability"
    RELIABILITY = "reliability"
    ADAPTABILITY = "adaptability"
    SAFETY = "safety"
    ETHICS = "ethics"
    REGULATION = "regulation"


ENGINEERING_CATEGORIES = frozenset(
    {Category.PREDICTABILITY, Category.RELIABILITY, Category.ADAPTABILITY, Category.SAFETY})


class Kind(str, enum.Enum):
    RANGE = "range"
    THRESHOLD = "threshold"
    EVENT_RESPONSE = "event-response"
    HOLD_DURATION = "hold-duration"
    SUCCESS_RATE = "success-rate"
    TREND = "trend"
    PROPORTIONALITY = "proportionality"
    NO_COLLISION = "no-collision"
    MANUAL = "manual"


class Method(str, enum.Enum):
    OBSERVATION = "observation"
    UNIT_TEST = "unit-test"
    EDGE_CASE_TEST = "edge-case-test"
    LIFE_CYCLE_TEST = "life-cycle-test"
    REPEATED_TEST = "repeated-test"
    MEASUREMENT = "measurement"
    FUNCTIONAL_TEST = "functional-test"
    BY_DESIGN = "by-design"


@dataclass(frozen=True)
class VerificationMethod:
    method: Method
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))


# Physical dimension of each monitored signal.
SIGNAL_UNITS = {
    "pressure": PA,
    "flow": M3_PER_S,
    "curvature": PER_M,
    "grip_force": N,
    "fingertip_displacement": M,
    "velocity": M_PER_S,
    "acceleration": M_PER_S2,
    "item_velocity": M_PER_S,
    "clearance": M,
    "body_position": M,
}

# Trial outcomes usable as the subject of success-rate and trend requirements.
OUTCOME_SIGNALS = frozenset({"placed", "grasped", "undamaged", "dropped", "damaged"})

TRIGGERS = frozenset({"pump_on", "pump_off"})

PHASE_NAMES = ("pre-grasp", "ascension", "translation", "descension")
# Pseudo-phase selecting samples taken while the pump is delivering flow.
INFLATION = "inflation"


@dataclass(frozen=True)
class SignalBound:
    """``signal NAME [in [lo, hi] | max hi | min lo] [within tol]``."""

    signal: str
    lo: Optional[Quantity] = None
    hi: Optional[Quantity] = None
    interval: bool = False
    tolerance: Optional[Quantity] = None

    @property
    def bounded(self) -> bool:
        return self.lo is not None or self.hi is not None


@dataclass(frozen=True)
class Params:
    bounds: tuple[SignalBound, ...] = ()
    fraction: Optional[Quantity] = None
    duration: Optional[Quantity] = None
    trigger: Optional[str] = None
    window: Optional[Quantity] = None
    # Trend requirements: (baseline, final) operating-hour windows.
    windows: tuple[tuple[Quantity, Quantity], ...] = ()

    def is_empty(self) -> bool:
        return self == Params()

    def bound_for(self, signal: str) -> Optional[SignalBound]:
        for b in self.bounds:
            if b.signal == signal:
                return b
        return None

    @property
    def outcome(self) -> Optional[str]:
        for b in self.bounds:
            if b.signal in OUTCOME_SIGNALS:
                return b.signal
        return None


@dataclass(frozen=True)
class Applicability:
    phases: tuple[str, ...] = ()
    # Selectors: item class, "class/profile", shape name or item name. Any match applies.
    items: tuple[str, ...] = ()
    # Largest item width as a fraction of the gripper opening width.
    width_max: Optional[Quantity] = None

    def is_empty(self) -> bool:
        return self == Applicability()


@dataclass(frozen=True)
class Requirement:
    id: str
    category: Category
    kind: Kind
    params: Params = field(default_factory=Params)
    methods: tuple[VerificationMethod, ...] = ()
    applicability: Applicability = field(default_factory=Applicability)
    text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "category", Category(self.category))
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "methods", tuple(self.methods))

    @property
    def statistical(self) -> bool:
        return self.params.fraction is not None

    @property
    def by_design(self) -> bool:
        return any(m.method is Method.BY_DESIGN for m in self.methods)


@dataclass(frozen=True)
class SpecificationDoc:
    name: str
    requirements: tuple[Requirement, ...]
    metadata: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "requirements", tuple(self.requirements))
        md = self.metadata.items() if isinstance(self.metadata, dict) else self.metadata
        object.__setattr__(self, "metadata", tuple((str(k), str(v)) for k, v in md))

    def get(self, req_id: str) -> Requirement:
        for r in self.requirements:
            if r.id == req_id:
                return r
        raise KeyError(req_id)

    def ids(self) -> list[str]:
        return [r.id for r in self.requirements]

    def __len__(self) -> int:
        return len(self.requirements)


@dataclass(frozen=True)
class Violation:
    rule: str
    requirement_id: Optional[str]
    message: str

    def __str__(self) -> str:
        where = f"{self.requirement_id}: " if self.requirement_id else ""
        return f"{self.rule}({where}{self.message})"


def _check_kind_params(r: Requirement) -> list[Violation]:
    out = []
    p = r.params

    def missing(what):
        out.append(Violation("MissingParam", r.id, f"{r.kind.value} requires {what}"))

    if r.kind is Kind.MANUAL:
        if not p.is_empty():
            out.append(Violation("ManualHasParams", r.id, "manual requirements take no parameters"))
        return out
    if r.kind is Kind.RANGE:
        if not any(b.lo is not None and b.hi is not None for b in p.bounds):
            missing("a closed interval bound")
    elif r.kind is Kind.THRESHOLD:
        if not any(b.bounded for b in p.bounds):
            missing("a max/min bound")
    elif r.kind is Kind.EVENT_RESPONSE:
        if p.trigger is None:
            missing("a trigger (for pump_on|pump_off)")
        if p.window is None:
            missing("a response window")
        if not any(b.bounded for b in p.bounds):
            missing("a curvature bound")
    elif r.kind is Kind.HOLD_DURATION:
        if p.duration is None:
            missing("a hold duration (for ...)")
    elif r.kind is Kind.SUCCESS_RATE:
        if p.outcome is None:
            missing("an outcome signal")
        if p.fraction is None:
            missing("a success fraction")
    elif r.kind is Kind.TREND:
        if p.outcome is None:
            missing("an outcome signal")
        if len(p.windows) != 2:
            missing("exactly two hour windows (baseline, final)")
        if not any(b.hi is not None for b in p.bounds):
            missing("a max increase bound")
    elif r.kind in (Kind.PROPORTIONALITY, Kind.NO_COLLISION):
        if not p.bounds:
            missing("a signal")
    return out


def validate_doc(doc: SpecificationDoc) -> list[Violation]:
    """Check well-formedness. Returns an empty list when the document is valid."""
    out: list[Violation] = []
    if not doc.requirements:
        out.append(Violation("EmptyDocument", None, "document has no requirements"))
    seen = set()
    for r in doc.requirements:
        if r.id in seen:
            out.append(Violation("DuplicateId", r.id, f"duplicate id {r.id}"))
        seen.add(r.id)
        if not r.methods:
            out.append(Violation("MissingMethod", r.id, "no verification method"))
        p = r.params
        if p.fraction is not None:
            f = p.fraction.value
            if p.fraction.unit != DIMENSIONLESS or not (0.0 < f <= 1.0):
                out.append(Violation("BoundOutOfRange", r.id, f"fraction {p.fraction} not in (0, 1]"))
        for b in p.bounds:
            if b.lo is not None and b.hi is not None and b.lo.unit == b.hi.unit and b.lo.value > b.hi.value:
                out.append(Violation("EmptyInterval", r.id, f"{b.signal} interval [{b.lo}, {b.hi}] is empty"))
            expected = SIGNAL_UNITS.get(b.signal)
            for q in (b.lo, b.hi):
                if q is not None and expected is not None and q.unit not in (expected, DIMENSIONLESS):
                    out.append(Violation("UnitMismatch", r.id, f"{b.signal} bound {q} is not {expected}"))
            if b.tolerance is not None and b.tolerance.unit != DIMENSIONLESS:
                out.append(Violation("UnitMismatch", r.id, f"tolerance {b.tolerance} must be dimensionless"))
        for q in (p.duration, p.window):
            if q is not None and q.unit != S:
                out.append(Violation("UnitMismatch", r.id, f"{q} is not a duration"))
            if q is not None and q.value <= 0:
                out.append(Violation("BoundOutOfRange", r.id, f"duration {q} must be positive"))
        for lo, hi in p.windows:
            if lo.unit != S or hi.unit != S:
                out.append(Violation("UnitMismatch", r.id, "trend windows must be durations"))
            elif lo.value > hi.value:
                out.append(Violation("EmptyInterval", r.id, f"window [{lo}, {hi}] is empty"))
        if p.trigger is not None and p.trigger not in TRIGGERS:
            out.append(Violation("UnknownTrigger", r.id, f"unknown trigger {p.trigger!r}"))
        for ph in r.applicability.phases:
            if ph not in PHASE_NAMES and ph != INFLATION:
                out.append(Violation("UnknownPhase", r.id, f"unknown phase {ph!r}"))
        wm = r.applicability.width_max
        if wm is not None and (wm.unit != DIMENSIONLESS or not 0 < wm.value <= 1):
            out.append(Violation("BoundOutOfRange", r.id, f"item width ratio {wm} not in (0, 1]"))
        out.extend(_check_kind_params(r))
    return out
