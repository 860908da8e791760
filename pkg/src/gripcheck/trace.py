"""Trial traces and their JSONL encoding.

One event per line. Every quantity is SI and its field name carries the unit
(``pressure_pa``, ``flow_m3s``...). The format is documented field by field in
docs/trace-format.md.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import IO, Any, Iterable, Optional, Union

import orjson

from .model import ItemSpec, PHASE_NAMES

Vec3 = tuple[float, float, float]

DEFAULT_SAMPLE_PERIOD = 0.01
SAMPLE_TOLERANCE = 1e-9
DEFAULT_BODY_PARTS = ("wrist", "palm", "finger_left", "finger_right")


class Phase(str, enum.Enum):
    PRE_GRASP = "pre-grasp"
    ASCENSION = "ascension"
    TRANSLATION = "translation"
    DESCENSION = "descension"


PHASE_ORDER = {p: i for i, p in enumerate(Phase)}
assert tuple(p.value for p in Phase) == PHASE_NAMES


class EventKind(str, enum.Enum):
    TRIAL_START = "trial_start"
    PHASE_START = "phase_start"
    PHASE_END = "phase_end"
    PUMP_ON = "pump_on"
    PUMP_OFF = "pump_off"
    SAMPLE = "sample"
    CONTACT_MADE = "contact_made"
    GRASP_ESTABLISHED = "grasp_established"
    ITEM_DROPPED = "item_dropped"
    ITEM_DAMAGED = "item_damaged"
    ITEM_PLACED = "item_placed"
    COLLISION = "collision"
    TRIAL_END = "trial_end"


class SchemaError(ValueError):
    def __init__(self, reason: str, line: Optional[int] = None):
        self.reason = reason
        self.line = line
        super().__init__(f"line {line}: {reason}" if line is not None else reason)


@dataclass(frozen=True)
class Sample:
    pressure_pa: float
    flow_m3s: float
    curvature_per_m: tuple[float, ...]
    fingertip_displacement_m: float
    grip_force_n: float
    gripper_velocity_mps: Vec3
    gripper_acceleration_mps2: Vec3
    gripper_body_positions_m: tuple[Vec3, ...]
    item_position_m: Vec3
    item_velocity_mps: Vec3

    def to_dict(self) -> dict:
        return {
            "pressure_pa": self.pressure_pa,
            "flow_m3s": self.flow_m3s,
            "curvature_per_m": list(self.curvature_per_m),
            "fingertip_displacement_m": self.fingertip_displacement_m,
            "grip_force_n": self.grip_force_n,
            "gripper_velocity_mps": list(self.gripper_velocity_mps),
            "gripper_acceleration_mps2": list(self.gripper_acceleration_mps2),
            "gripper_body_positions_m": [list(p) for p in self.gripper_body_positions_m],
            "item_position_m": list(self.item_position_m),
            "item_velocity_mps": list(self.item_velocity_mps),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Sample":
        def num(key):
            v = _field(d, key)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SchemaError(f"field {key} must be a finite number")
            return float(v)

        def vec(key, v=None, n=3):
            v = _field(d, key) if v is None else v
            # fast path: a list of plain finite floats of the right length
            if (type(v) is list and v and (not n or len(v) == n)
                    and all(type(x) is float for x in v) and all(map(math.isfinite, v))):
                return tuple(v)
            if not isinstance(v, list) or (n and len(v) != n) or not v:
                raise SchemaError(f"field {key} must be a list of {n or 'some'} numbers")
            out = []
            for x in v:
                if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                    raise SchemaError(f"field {key} must hold finite numbers")
                out.append(float(x))
            return tuple(out)

        bodies = _field(d, "gripper_body_positions_m")
        if not isinstance(bodies, list):
            raise SchemaError("field gripper_body_positions_m must be a list of 3-vectors")
        return cls(
            pressure_pa=num("pressure_pa"),
            flow_m3s=num("flow_m3s"),
            curvature_per_m=vec("curvature_per_m", n=0),
            fingertip_displacement_m=num("fingertip_displacement_m"),
            grip_force_n=num("grip_force_n"),
            gripper_velocity_mps=vec("gripper_velocity_mps"),
            gripper_acceleration_mps2=vec("gripper_acceleration_mps2"),
            gripper_body_positions_m=tuple(vec("gripper_body_positions_m", b) for b in bodies),
            item_position_m=vec("item_position_m"),
            item_velocity_mps=vec("item_velocity_mps"),
        )


@dataclass(frozen=True)
class TrialMeta:
    trial_id: int
    item: ItemSpec
    operating_hours: float
    rng_seed: int
    sample_period_s: float = DEFAULT_SAMPLE_PERIOD
    opening_width_m: Optional[float] = None
    body_parts: tuple[str, ...] = DEFAULT_BODY_PARTS
    item_velocity_pinned: bool = False
    faults: tuple[tuple[str, Any], ...] = ()

    @property
    def orientation_rad(self) -> float:
        return self.item.orientation_rad

    @property
    def size_ratio(self) -> Optional[float]:
        if not self.opening_width_m:
            return None
        return self.item.width_m / self.opening_width_m

    def to_dict(self) -> dict:
        item = self.item.to_dict()
        orientation = item.pop("orientation_rad")
        return {
            "trial_id": self.trial_id,
            "item": item,
            "orientation_rad": orientation,
            "operating_hours": self.operating_hours,
            "rng_seed": self.rng_seed,
            "sample_period_s": self.sample_period_s,
            "opening_width_m": self.opening_width_m,
            "body_parts": list(self.body_parts),
            "item_velocity_pinned": self.item_velocity_pinned,
            "faults": dict(self.faults),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrialMeta":
        try:
            item = dict(_field(d, "item"))
            item["orientation_rad"] = _field(d, "orientation_rad")
            spec = ItemSpec.from_dict(item)
            faults = d.get("faults") or {}
            if not isinstance(faults, dict):
                raise SchemaError("faults must be an object")
            return cls(
                trial_id=int(_field(d, "trial_id")),
                item=spec,
                operating_hours=float(_field(d, "operating_hours")),
                rng_seed=int(_field(d, "rng_seed")),
                sample_period_s=float(d.get("sample_period_s", DEFAULT_SAMPLE_PERIOD)),
                opening_width_m=None if d.get("opening_width_m") is None else float(d["opening_width_m"]),
                body_parts=tuple(str(p) for p in d.get("body_parts", DEFAULT_BODY_PARTS)),
                item_velocity_pinned=bool(d.get("item_velocity_pinned", False)),
                faults=tuple(faults.items()),
            )
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"bad trial_start payload: {e}") from None


def _field(d: dict, key: str):
    try:
        return d[key]
    except KeyError:
        raise SchemaError(f"missing field {key}") from None


@dataclass(frozen=True)
class TraceEvent:
    t: float
    kind: EventKind
    # Sample for SAMPLE, TrialMeta for TRIAL_START, plain dict otherwise.
    payload: Any = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"t": self.t, "kind": self.kind.value}
        if self.kind is EventKind.SAMPLE or self.kind is EventKind.TRIAL_START:
            d.update(self.payload.to_dict())
        else:
            d.update(self.payload)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TraceEvent":
        if not isinstance(d, dict):
            raise SchemaError("event must be a JSON object")
        t = _field(d, "t")
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t):
            raise SchemaError("t must be a finite number")
        try:
            kind = EventKind(_field(d, "kind"))
        except (ValueError, TypeError):
            raise SchemaError(f"unknown event kind {d.get('kind')!r}") from None
        rest = {k: v for k, v in d.items() if k not in ("t", "kind")}
        if kind is EventKind.SAMPLE:
            payload = Sample.from_dict(rest)
        elif kind is EventKind.TRIAL_START:
            payload = TrialMeta.from_dict(rest)
        else:
            payload = rest
        return cls(float(t), kind, payload)


@dataclass(frozen=True)
class Trace:
    events: tuple[TraceEvent, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    @property
    def trial_meta(self) -> TrialMeta:
        return self.events[0].payload

    @property
    def t_end(self) -> float:
        return self.events[-1].t

    def samples(self) -> list[tuple[int, TraceEvent]]:
        return [(i, e) for i, e in enumerate(self.events) if e.kind is EventKind.SAMPLE]

    def first(self, kind: EventKind) -> Optional[tuple[int, TraceEvent]]:
        for i, e in enumerate(self.events):
            if e.kind is kind:
                return i, e
        return None

    def has(self, kind: EventKind) -> bool:
        return self.first(kind) is not None


_REQUIRED_KEYS = {
    EventKind.PHASE_START: ("phase",),
    EventKind.PHASE_END: ("phase",),
    EventKind.CONTACT_MADE: ("part",),
    EventKind.COLLISION: ("part",),
}


def validate_events(events: Iterable[TraceEvent]) -> None:
    """Raise :class:`SchemaError` if the event sequence is not a legal trace.

    Line numbers in errors are 1-based event positions (one event per line).
    """
    events = list(events)
    if not events:
        raise SchemaError("trace has no events")
    if events[0].kind is not EventKind.TRIAL_START:
        raise SchemaError("first event must be trial_start", 1)
    if events[-1].kind is not EventKind.TRIAL_END:
        raise SchemaError("last event must be trial_end", len(events))
    period = events[0].payload.sample_period_s
    if not period > 0:
        raise SchemaError("sample_period_s must be positive", 1)
    prev_t = -math.inf
    last_phase = -1
    open_phase: Optional[Phase] = None
    contact = grasp = False
    outcome: Optional[EventKind] = None
    prev_sample_t: Optional[float] = None
    for ln, e in enumerate(events, start=1):
        if not math.isfinite(e.t) or e.t < 0:
            raise SchemaError("t must be finite and non-negative", ln)
        if e.t < prev_t:
            raise SchemaError(f"non-monotone t at line {ln}", ln)
        prev_t = e.t
        if e.kind is EventKind.TRIAL_START and ln != 1:
            raise SchemaError("trial_start may only appear first", ln)
        if e.kind is EventKind.TRIAL_END and ln != len(events):
            raise SchemaError("trial_end may only appear last", ln)
        for key in _REQUIRED_KEYS.get(e.kind, ()):
            if key not in e.payload:
                raise SchemaError(f"{e.kind.value} missing field {key}", ln)
        if e.kind is EventKind.PHASE_START:
            try:
                ph = Phase(e.payload["phase"])
            except ValueError:
                raise SchemaError(f"unknown phase {e.payload['phase']!r}", ln) from None
            if open_phase is not None:
                raise SchemaError(f"phase {ph.value} starts before {open_phase.value} ends", ln)
            if PHASE_ORDER[ph] <= last_phase:
                raise SchemaError(f"phase {ph.value} out of order or repeated", ln)
            last_phase = PHASE_ORDER[ph]
            open_phase = ph
        elif e.kind is EventKind.PHASE_END:
            if open_phase is None or e.payload["phase"] != open_phase.value:
                raise SchemaError(f"phase_end {e.payload['phase']!r} does not close the open phase", ln)
            open_phase = None
        elif e.kind is EventKind.CONTACT_MADE:
            contact = True
        elif e.kind is EventKind.GRASP_ESTABLISHED:
            if not contact:
                raise SchemaError("grasp_established before contact_made", ln)
            grasp = True
        elif e.kind in (EventKind.ITEM_DROPPED, EventKind.ITEM_PLACED):
            if outcome is not None:
                raise SchemaError("conflicting outcomes", ln)
            outcome = e.kind
            if e.kind is EventKind.ITEM_DROPPED and not grasp:
                raise SchemaError("item_dropped before grasp_established", ln)
        elif e.kind is EventKind.SAMPLE:
            if prev_sample_t is not None and abs(e.t - prev_sample_t - period) > SAMPLE_TOLERANCE:
                raise SchemaError(f"sample spacing {e.t - prev_sample_t!r} differs from period {period}", ln)
            prev_sample_t = e.t
            n_parts = len(events[0].payload.body_parts)
            if len(e.payload.gripper_body_positions_m) != n_parts:
                raise SchemaError(f"sample has {len(e.payload.gripper_body_positions_m)} body positions, "
                                  f"expected {n_parts}", ln)
    if open_phase is not None:
        raise SchemaError(f"phase {open_phase.value} never ends", len(events))


def event_line(e: TraceEvent) -> str:
    return orjson.dumps(e.to_dict()).decode("utf-8")


def dumps_trace(trace: Trace) -> str:
    validate_events(trace.events)
    return "".join(event_line(e) + "\n" for e in trace.events)


def write_jsonl(trace: Trace, sink: IO) -> None:
    """Validate ``trace`` and write it, one JSON object per line."""
    text = dumps_trace(trace)
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def loads_trace(text: Union[str, bytes]) -> Trace:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchemaError(f"not UTF-8: {e.reason}") from None
    events = []
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            raise SchemaError("blank line", ln)
        try:
            d = orjson.loads(line)
        except orjson.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e.msg}", ln) from None
        try:
            events.append(TraceEvent.from_dict(d))
        except SchemaError as e:
            raise SchemaError(e.reason, ln) from None
    validate_events(events)
    return Trace(tuple(events))


def read_jsonl(source: IO) -> Trace:
    """Read and validate one trace; raises :class:`SchemaError` with a line number."""
    return loads_trace(source.read())
