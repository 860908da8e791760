"""Seeded campaigns of trials over the item library."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from ..model import ItemClass
from ..trace import DEFAULT_SAMPLE_PERIOD, Trace
from .items import ITEMS, ORIENTATIONS
from .physics import GripperConfig
from .trial import Faults, Scenario, ScenarioError, run_trial

CLASSES = (ItemClass.SOFT_FRAGILE, ItemClass.SOFT_NON_FRAGILE,
           ItemClass.HARD_FRAGILE, ItemClass.HARD_NON_FRAGILE)
GOLDEN = 0.6180339887498949
MASK64 = (1 << 64) - 1


def splitmix64(seed: int, index: int) -> int:
    """Derive an independent 64-bit stream seed for trial ``index``."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def lifecycle_hours(index: int, horizon: float = 100.0) -> float:
    """Operating hours for trial ``index`` on a low-discrepancy life-cycle schedule.

    About 30% of trials land in the first tenth of the horizon, 30% in the
    last tenth, and the rest in between.
    """
    u = math.fmod((index + 1) * GOLDEN, 1.0)
    tenth = horizon / 10.0
    if u < 0.3:
        h = (u / 0.3) * tenth
    elif u < 0.7:
        h = tenth + (u - 0.3) / 0.4 * (horizon - 2 * tenth)
    else:
        h = horizon - tenth + (u - 0.7) / 0.3 * tenth
    return round(h, 6)


@dataclass(frozen=True)
class Campaign:
    scenarios: tuple[Scenario, ...]
    rng_seed: int = 0
    sample_period_s: float = DEFAULT_SAMPLE_PERIOD
    hours_horizon: float = 100.0
    config: GripperConfig = field(default_factory=GripperConfig)

    def __len__(self) -> int:
        return len(self.scenarios)


def default_campaign(seed: int = 0, trials_per_class: int = 100, faults: Faults = Faults(),
                     config: Optional[GripperConfig] = None, hours_horizon: float = 100.0) -> Campaign:
    """Round-robin over classes, orientations and items, with life-cycle hours."""
    scenarios = []
    for i in range(trials_per_class * len(CLASSES)):
        cls = CLASSES[i % len(CLASSES)]
        items = ITEMS[cls]
        item = items[(i // 16) % len(items)].with_orientation(ORIENTATIONS[(i // 4) % len(ORIENTATIONS)])
        scenarios.append(Scenario(trial_id=i, item=item, operating_hours=lifecycle_hours(i, hours_horizon),
                                  faults=faults))
    return Campaign(tuple(scenarios), seed, hours_horizon=hours_horizon,
                    config=config or GripperConfig())


def _run_one(args) -> Union[Trace, ScenarioError]:
    scenario, config, seed, period = args
    try:
        return run_trial(scenario, config, seed, period)
    except ScenarioError as e:
        return e


def iter_campaign(campaign: Campaign, workers: int = 1) -> Iterator[Union[Trace, ScenarioError]]:
    """Yield results in scenario order; infeasible scenarios yield their :class:`ScenarioError`.

    The sequence is the same for any ``workers`` value because every trial
    draws from its own derived seed.
    """
    jobs = ((sc, campaign.config, splitmix64(campaign.rng_seed, sc.trial_id), campaign.sample_period_s)
            for sc in campaign.scenarios)
    if workers <= 1:
        for job in jobs:
            yield _run_one(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_run_one, jobs, chunksize=4)


def run_campaign(campaign: Campaign, workers: int = 1) -> list[Union[Trace, ScenarioError]]:
    """Run every scenario; infeasible ones come back as :class:`ScenarioError` in place."""
    return list(iter_campaign(campaign, workers))
