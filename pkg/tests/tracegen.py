"""Random, schema-valid small traces for property and equivalence tests."""

from __future__ import annotations

import random

from gripcheck.model import ItemSpec
from gripcheck.sim.items import ITEMS_BY_NAME, ORIENTATIONS
from gripcheck.trace import EventKind, Phase, Sample, Trace, TraceEvent, TrialMeta

PSI = 6894.757
LPM = 1.0 / 60000.0
PHASES = [Phase.PRE_GRASP, Phase.ASCENSION, Phase.TRANSLATION, Phase.DESCENSION]
NAMES = sorted(ITEMS_BY_NAME)


def random_sample(rng: random.Random, n_parts: int = 4) -> Sample:
    def vec(scale):
        return tuple(rng.uniform(-scale, scale) for _ in range(3))

    k = rng.uniform(0, 12)
    return Sample(
        pressure_pa=rng.uniform(2.5, 4.5) * PSI,
        flow_m3s=rng.choice([0.0, rng.uniform(1.8, 3.4) * LPM]),
        curvature_per_m=(k, k + rng.uniform(-0.5, 0.5)),
        fingertip_displacement_m=rng.uniform(0, 0.004),
        grip_force_n=rng.uniform(0, 2.5),
        gripper_velocity_mps=vec(0.02),
        gripper_acceleration_mps2=vec(0.1),
        gripper_body_positions_m=tuple(vec(0.2) for _ in range(n_parts)),
        item_position_m=vec(0.1),
        item_velocity_mps=vec(0.001) if rng.random() < 0.2 else (0.0, 0.0, 0.0),
    )


def random_trace(seed: int, max_samples: int = 50, dt: float = 0.25) -> Trace:
    """A trace with up to ``max_samples`` samples spread over the four phases.

    ``dt`` is coarse so that holds of several seconds fit in few samples.
    """
    rng = random.Random(seed)
    item: ItemSpec = ITEMS_BY_NAME[rng.choice(NAMES)].with_orientation(rng.choice(ORIENTATIONS))
    meta = TrialMeta(trial_id=seed, item=item, operating_hours=round(rng.uniform(0, 100), 3),
                     rng_seed=seed, sample_period_s=dt, opening_width_m=0.08,
                     item_velocity_pinned=rng.random() < 0.5)
    n_total = rng.randint(4, max_samples)
    cuts = sorted(rng.sample(range(1, n_total), 3)) if n_total >= 4 else [1, 2, 3]
    counts = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], n_total - cuts[2]]
    drop_phase = rng.choice([None, None, Phase.ASCENSION, Phase.TRANSLATION, Phase.DESCENSION])
    events = [TraceEvent(0.0, EventKind.TRIAL_START, meta)]
    k = 0
    grasped = False
    done = False

    def t():
        return round(k * dt, 9)

    for phase, count in zip(PHASES, counts):
        events.append(TraceEvent(t(), EventKind.PHASE_START, {"phase": phase.value}))
        for j in range(count):
            if phase is Phase.ASCENSION and j == 0:
                events.append(TraceEvent(t(), EventKind.PUMP_ON, {}))
            if phase is Phase.ASCENSION and j == count // 2 and not grasped:
                events.append(TraceEvent(t(), EventKind.CONTACT_MADE, {"part": "finger_left"}))
                events.append(TraceEvent(t(), EventKind.GRASP_ESTABLISHED, {}))
                grasped = True
            if phase is drop_phase and grasped and j == count - 1 and rng.random() < 0.8:
                events.append(TraceEvent(t(), EventKind.ITEM_DROPPED, {"phase": phase.value}))
                done = True
            if rng.random() < 0.05 and grasped:
                events.append(TraceEvent(t(), EventKind.ITEM_DAMAGED, {"reason": "random"}))
            events.append(TraceEvent(t(), EventKind.SAMPLE, random_sample(rng)))
            k += 1
            if done:
                break
        events.append(TraceEvent(round((k - 1) * dt, 9) if k else 0.0, EventKind.PHASE_END,
                                 {"phase": phase.value}))
        if done:
            break
    if not done and grasped:
        events.append(TraceEvent(round((k - 1) * dt, 9), EventKind.ITEM_PLACED, {}))
    events.append(TraceEvent(round(max(k - 1, 0) * dt, 9), EventKind.TRIAL_END, {}))
    return Trace(tuple(events))
