"""Hand-made traces with chosen event times, for targeted monitor tests."""

from __future__ import annotations

from gripcheck.sim.items import ITEMS_BY_NAME
from gripcheck.trace import EventKind, Sample, Trace, TraceEvent, TrialMeta

PSI = 6894.757
FAR = (0.0, 0.0, 1.0)


def phase_at(t: float) -> str:
    if t < 1.0:
        return "pre-grasp"
    if t < 5.0:
        return "ascension"
    if t < 20.0:
        return "translation"
    return "descension"


def sample(**overrides) -> Sample:
    fields = dict(
        pressure_pa=3.5 * PSI, flow_m3s=0.0, curvature_per_m=(0.0, 0.0),
        fingertip_displacement_m=0.0, grip_force_n=0.0,
        gripper_velocity_mps=(0.0, 0.0, 0.0), gripper_acceleration_mps2=(0.0, 0.0, 0.0),
        gripper_body_positions_m=(FAR,) * 4, item_position_m=(0.0, 0.0, 0.0),
        item_velocity_mps=(0.0, 0.0, 0.0))
    fields.update(overrides)
    return Sample(**fields)


def make_trace(n=60, dt=0.5, grasp_at=2.0, drop_at=None, pump_on_at=1.0, item="egg",
               orientation=0.0, hours=0.0, trial_id=0, pinned=True, opening=0.08,
               sample_fn=None, extra=()) -> Trace:
    """Phases switch at 1, 5 and 20 s; ``extra`` holds (t, kind, payload) events.

    ``sample_fn(t, phase)`` returns field overrides for the sample at ``t``.
    A drop ends the trial; otherwise a grasped item is placed at the end.
    """
    meta = TrialMeta(trial_id, ITEMS_BY_NAME[item].with_orientation(orientation), hours, 0,
                     sample_period_s=dt, opening_width_m=opening, item_velocity_pinned=pinned)
    planned = list(extra)
    if pump_on_at is not None:
        planned.append((pump_on_at, EventKind.PUMP_ON, {}))
    if grasp_at is not None:
        planned += [(grasp_at, EventKind.CONTACT_MADE, {"part": "finger_left"}),
                    (grasp_at, EventKind.GRASP_ESTABLISHED, {})]
    events = [TraceEvent(0.0, EventKind.TRIAL_START, meta)]
    phase = None
    t = 0.0
    for k in range(n):
        t = round(k * dt, 9)
        ph = phase_at(t)
        if ph != phase:
            if phase is not None:
                events.append(TraceEvent(t, EventKind.PHASE_END, {"phase": phase}))
            events.append(TraceEvent(t, EventKind.PHASE_START, {"phase": ph}))
            phase = ph
        for when, kind, payload in planned:
            if abs(when - t) < 1e-9:
                events.append(TraceEvent(t, kind, payload))
        if drop_at is not None and abs(drop_at - t) < 1e-9:
            events += [TraceEvent(t, EventKind.ITEM_DROPPED, {"phase": ph}),
                       TraceEvent(t, EventKind.PHASE_END, {"phase": ph}),
                       TraceEvent(t, EventKind.TRIAL_END, {})]
            return Trace(tuple(events))
        events.append(TraceEvent(t, EventKind.SAMPLE, sample(**(sample_fn(t, ph) if sample_fn else {}))))
    if grasp_at is not None:
        events.append(TraceEvent(t, EventKind.ITEM_PLACED, {}))
    events += [TraceEvent(t, EventKind.PHASE_END, {"phase": phase}), TraceEvent(t, EventKind.TRIAL_END, {})]
    return Trace(tuple(events))
