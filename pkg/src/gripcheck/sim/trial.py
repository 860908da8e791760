"""One pick-and-place trial: pre-grasp, ascension, translation, descension.

Events at a timestamp are emitted before the sample taken at that timestamp,
so a sample always reflects every event that precedes it in the trace.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from ..model import ItemSpec
from ..trace import (
    DEFAULT_BODY_PARTS,
    DEFAULT_SAMPLE_PERIOD,
    EventKind,
    Phase,
    Sample,
    Trace,
    TraceEvent,
    TrialMeta,
)
from .physics import (
    ContactModel,
    GripperConfig,
    GripperState,
    contact_model,
    drop_probability,
    step_inflation,
    step_vent,
    stop_pressure,
    tip_offsets,
)

GRAVITY = 9.81
VENT_WINDOW_S = 2.0
IDLE_S = 0.2
HOLD_S = 0.3


class ScenarioError(ValueError):
    def __init__(self, trial_id: int, reason: str):
        self.trial_id = trial_id
        self.reason = reason
        super().__init__(f"trial {trial_id}: {reason}")


@dataclass(frozen=True)
class Faults:
    overpressure: bool = False
    degradation_slope: float = 0.0  # drop-probability increment per operating hour
    collision_bug: bool = False
    speed_violation: bool = False

    def as_dict(self) -> dict:
        return {"overpressure": self.overpressure, "degradation_slope": self.degradation_slope,
                "collision_bug": self.collision_bug, "speed_violation": self.speed_violation}

    def any(self) -> bool:
        return self != Faults()


@dataclass(frozen=True)
class Scenario:
    trial_id: int
    item: ItemSpec
    operating_hours: float = 0.0
    faults: Faults = field(default_factory=Faults)
    start_position_m: tuple[float, float, float] = (0.0, 0.0, 0.0)
    target_position_m: Optional[tuple[float, float, float]] = None

    @property
    def orientation_rad(self) -> float:
        return self.item.orientation_rad


class Trapezoid:
    """Trapezoidal (or triangular) velocity profile over a fixed distance."""

    def __init__(self, distance: float, vmax: float, amax: float):
        self.d = distance
        self.a = amax
        if distance * amax <= vmax * vmax:  # never reaches cruise speed
            self.ta = math.sqrt(distance / amax)
            self.v = amax * self.ta
            self.tc = 0.0
        else:
            self.v = vmax
            self.ta = vmax / amax
            self.tc = (distance - vmax * self.ta) / vmax
        self.duration = 2 * self.ta + self.tc

    def at(self, tau: float) -> tuple[float, float, float]:
        """(position, velocity, acceleration) at time ``tau`` into the move."""
        ta, tc, a, v = self.ta, self.tc, self.a, self.v
        if tau <= 0:
            return 0.0, 0.0, 0.0
        if tau >= self.duration:
            return self.d, 0.0, 0.0
        if tau < ta:
            return 0.5 * a * tau * tau, a * tau, a
        if tau < ta + tc:
            return 0.5 * a * ta * ta + v * (tau - ta), v, 0.0
        r = self.duration - tau
        return self.d - 0.5 * a * r * r, a * r, -a


class _Dropped(Exception):
    pass


class _TrialRun:
    def __init__(self, scenario: Scenario, config: GripperConfig, seed: int, sample_period: float):
        self.sc = scenario
        self.cfg = config
        self.dt = sample_period
        self.item = scenario.item
        self.r = self.item.width_m / 2.0
        self.faults = scenario.faults
        self.events: list[TraceEvent] = []
        self.k = 0
        self.state = GripperState()
        self.contact: Optional[ContactModel] = None
        self.pump = "off"
        self.target_pa = config.commanded_pressure_pa
        self.contact_seen = False
        self.grasped = False
        self.damaged = False
        self.holding = False
        self.phase: Optional[Phase] = None

        rng = random.Random(seed)
        self.draws = [(rng.random(), rng.random()) for _ in range(3)]

        self.grasp_model = contact_model(config, self.item.item_class, self.item.width_m)
        self.grasp_depth = tip_offsets(self.grasp_model.curvature, config.finger_length_m)[1]
        self.z_grasp = self.r + self.grasp_depth
        self.z_high = self.r + config.finger_length_m + config.approach_clearance_m
        sx, sy, _ = scenario.start_position_m
        self.palm = [sx, sy, self.z_high]
        self.vel = (0.0, 0.0, 0.0)
        self.acc = (0.0, 0.0, 0.0)
        self.item_pos = (sx, sy, self.r)
        self.item_vel = (0.0, 0.0, 0.0)

    # -- recording -----------------------------------------------------------
    @property
    def t(self) -> float:
        return round(self.k * self.dt, 9)

    def emit(self, kind: EventKind, payload=None):
        self.events.append(TraceEvent(self.t, kind, {} if payload is None else payload))

    def record(self):
        st = self.state
        L = self.cfg.finger_length_m
        half = self.cfg.opening_width_m / 2.0
        px, py, pz = self.palm
        bodies = [(px, py, pz + self.cfg.wrist_offset_m), (px, py, pz)]
        for side, kappa in zip((-1.0, 1.0), st.curvature):
            inward, down = tip_offsets(kappa, L)
            bodies.append((px + side * (half - inward), py, pz - down))
        self.events.append(TraceEvent(self.t, EventKind.SAMPLE, Sample(
            pressure_pa=st.pressure_pa,
            flow_m3s=st.flow_m3s,
            curvature_per_m=tuple(st.curvature),
            fingertip_displacement_m=st.fingertip_displacement_m,
            grip_force_n=st.grip_force_n,
            gripper_velocity_mps=self.vel,
            gripper_acceleration_mps2=self.acc,
            gripper_body_positions_m=tuple(bodies),
            item_position_m=self.item_pos,
            item_velocity_mps=self.item_vel,
        )))

    # -- physics -------------------------------------------------------------
    def advance(self):
        self.k += 1
        if self.pump == "fill":
            self.state = step_inflation(self.state, self.cfg, self.cfg.supply_flow_m3s, self.dt,
                                        self.target_pa, self.contact)
        elif self.pump == "vent":
            self.state = step_vent(self.state, self.cfg, self.dt, self.contact)
        self.check_contact()

    def check_contact(self):
        st = self.state
        if st.contact[0] and not self.contact_seen:
            self.contact_seen = True
            self.holding = True
            self.emit(EventKind.CONTACT_MADE, {"part": "finger_left"})
            self.emit(EventKind.CONTACT_MADE, {"part": "finger_right"})
        if self.contact_seen and not self.grasped and st.grip_force_n > self.cfg.grasp_force_threshold_n:
            self.grasped = True
            self.emit(EventKind.GRASP_ESTABLISHED, {"grip_force_n": st.grip_force_n})
        if self.holding and not self.damaged:
            f_lim = self.item.fragility_force_limit_n
            d_lim = self.item.fragility_displacement_limit_m
            if f_lim is not None and st.grip_force_n > f_lim:
                self.damaged = True
                self.emit(EventKind.ITEM_DAMAGED, {"reason": "grip force over limit"})
            elif d_lim is not None and st.fingertip_displacement_m > d_lim:
                self.damaged = True
                self.emit(EventKind.ITEM_DAMAGED, {"reason": "fingertip displacement over limit"})
        if self.holding and not st.contact[0] and self.pump == "vent":
            self.holding = False
            self.item_vel = (0.0, 0.0, 0.0)
            self.emit(EventKind.ITEM_PLACED)

    def tick(self, n: int):
        for _ in range(n):
            self.advance()
            self.record()

    def steps(self, seconds: float) -> int:
        return max(1, int(round(seconds / self.dt)))

    def fill_to_target(self):
        guard = 0
        while self.state.pressure_pa < self.target_pa and guard < 100000:
            self.tick(1)
            guard += 1
        # one more step so the trace shows the valve closing
        self.tick(1)

    def vent(self):
        self.emit(EventKind.PUMP_OFF)
        self.pump = "vent"
        self.tick(self.steps(VENT_WINDOW_S))

    def move(self, axis: int, distance: float, vmax: float, amax: float, drop_draw=None):
        prof = Trapezoid(abs(distance), vmax, amax)
        sign = 1.0 if distance >= 0 else -1.0
        origin = list(self.palm)
        n = int(math.ceil(prof.duration / self.dt - 1e-9))
        drop_step = None
        if drop_draw is not None and n > 0:
            drop_step = min(n, max(1, int(math.ceil(drop_draw * n))))
        for j in range(1, n + 1):
            pos, v, a = prof.at(j * self.dt)
            self.palm[axis] = origin[axis] + sign * pos
            vel = [0.0, 0.0, 0.0]
            acc = [0.0, 0.0, 0.0]
            vel[axis] = sign * v
            acc[axis] = sign * a
            self.vel, self.acc = tuple(vel), tuple(acc)
            if self.holding:
                self.item_pos = (self.palm[0], self.palm[1], self.palm[2] - self.grasp_depth)
                self.item_vel = self.vel
            if drop_step == j:
                self.k += 1
                self.drop()
                self.record()
                raise _Dropped
            self.advance()
            self.record()
        self.vel = self.acc = (0.0, 0.0, 0.0)
        if self.holding:
            self.item_vel = (0.0, 0.0, 0.0)

    def drop(self):
        self.emit(EventKind.ITEM_DROPPED, {"phase": self.phase.value})
        self.holding = False
        self.contact = None
        self.vel = self.acc = (0.0, 0.0, 0.0)
        self.item_pos = (self.item_pos[0], self.item_pos[1], self.r)
        self.item_vel = (0.0, 0.0, 0.0)
        # fingers lose the item and curl freely at the current pressure
        kappa = self.cfg.curvature_gain * self.state.pressure_pa
        self.state = GripperState(pressure_pa=self.state.pressure_pa, curvature=(kappa, kappa),
                                  flow_m3s=0.0, pump_on=self.pump == "fill")

    def begin(self, phase: Phase):
        self.phase = phase
        self.emit(EventKind.PHASE_START, {"phase": phase.value})

    def end(self):
        self.emit(EventKind.PHASE_END, {"phase": self.phase.value})
        self.phase = None

    # -- script --------------------------------------------------------------
    def run(self, meta: TrialMeta) -> Trace:
        cfg, faults = self.cfg, self.faults
        self.emit(EventKind.TRIAL_START, meta)
        self.begin(Phase.PRE_GRASP)
        self.record()
        self.tick(self.steps(IDLE_S))

        commanded = cfg.overpressure_pa if faults.overpressure else cfg.commanded_pressure_pa
        vmax, amax = cfg.vertical_velocity_mps, cfg.vertical_acceleration_mps2
        if faults.collision_bug:
            overshoot = 2.0 * self.r
            self.move(2, overshoot - self.palm[2], vmax, amax)
            self.emit(EventKind.COLLISION, {"part": "palm"})
            self.move(2, self.z_grasp - self.palm[2], vmax, amax)
        else:
            self.move(2, self.z_grasp - self.palm[2], vmax, amax)
        self.end()

        p_trial = self.trial_drop_probability(commanded)
        p_phase = 1.0 - (1.0 - p_trial) ** (1.0 / 3.0)
        draws = [(u < p_phase, w) for u, w in self.draws]

        try:
            self.begin(Phase.ASCENSION)
            self.contact = self.grasp_model
            self.target_pa = min(commanded, stop_pressure(cfg, self.grasp_model,
                                                          self.item.fragility_force_limit_n,
                                                          self.item.fragility_displacement_limit_m))
            self.emit(EventKind.PUMP_ON, {"commanded_pressure_pa": commanded,
                                          "stop_pressure_pa": self.target_pa,
                                          "flow_m3s": cfg.supply_flow_m3s})
            self.pump = "fill"
            self.fill_to_target()
            self.tick(self.steps(HOLD_S))
            if not self.grasped:
                self.end()
                self.vent()
                self.emit(EventKind.TRIAL_END)
                return Trace(tuple(self.events))
            drop, w = draws[0]
            self.move(2, cfg.lift_height_m, vmax, amax, w if drop else None)
            self.end()

            self.begin(Phase.TRANSLATION)
            if faults.speed_violation:
                tv, ta = cfg.fault_velocity_mps, cfg.fault_acceleration_mps2
            else:
                tv, ta = cfg.max_velocity_mps, cfg.max_acceleration_mps2
            drop, w = draws[1]
            self.move(0, self.transport_distance(), tv, ta, w if drop else None)
            self.end()

            self.begin(Phase.DESCENSION)
            drop, w = draws[2]
            self.move(2, -cfg.lift_height_m, vmax, amax, w if drop else None)
            self.vent()
            self.end()
        except _Dropped:
            self.end()
            self.vent()
        self.emit(EventKind.TRIAL_END)
        return Trace(tuple(self.events))

    def transport_distance(self) -> float:
        if self.sc.target_position_m is None:
            return self.cfg.transport_distance_m
        s, e = self.sc.start_position_m, self.sc.target_position_m
        return math.dist(s[:2], e[:2]) or self.cfg.transport_distance_m

    def trial_drop_probability(self, commanded: float) -> float:
        cfg = self.cfg
        target = min(commanded, stop_pressure(cfg, self.grasp_model, self.item.fragility_force_limit_n,
                                              self.item.fragility_displacement_limit_m))
        p_c = self.grasp_model.curvature / cfg.curvature_gain
        force = self.grasp_model.force_gain * max(0.0, target - p_c)
        needed = self.item.mass_kg * GRAVITY / (2.0 * cfg.friction_coefficient)
        ratio = self.item.width_m / cfg.opening_width_m
        return drop_probability(cfg, ratio, force - needed, self.faults.degradation_slope,
                                self.sc.operating_hours)


def run_trial(scenario: Scenario, config: Optional[GripperConfig] = None, seed: int = 0,
              sample_period: float = DEFAULT_SAMPLE_PERIOD) -> Trace:
    """Simulate one trial and return its trace.

    Raises :class:`ScenarioError` when the item cannot fit between the fingers.
    """
    config = config or GripperConfig()
    if scenario.item.width_m > config.opening_width_m:
        raise ScenarioError(scenario.trial_id,
                            f"item width {scenario.item.width_m} m exceeds opening {config.opening_width_m} m")
    if scenario.item.width_m == config.opening_width_m:
        raise ScenarioError(scenario.trial_id, "item fills the opening; fingers cannot close on it")
    meta = TrialMeta(
        trial_id=scenario.trial_id,
        item=scenario.item,
        operating_hours=scenario.operating_hours,
        rng_seed=seed,
        sample_period_s=sample_period,
        opening_width_m=config.opening_width_m,
        body_parts=DEFAULT_BODY_PARTS,
        item_velocity_pinned=True,
        faults=tuple(scenario.faults.as_dict().items()),
    )
    return _TrialRun(scenario, config, seed, sample_period).run(meta)
