from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gripcheck.model import ItemClass
from gripcheck.sim import Faults, ScenarioError, default_campaign, iter_campaign, run_campaign
from gripcheck.sim.campaign import Campaign, lifecycle_hours, splitmix64
from gripcheck.sim.items import ITEMS_BY_NAME
from gripcheck.sim.trial import Scenario
from gripcheck.trace import EventKind


def test_splitmix64_reference_values():
    # first outputs of the reference generator seeded with 0
    assert splitmix64(0, 0) == 0xE220A8397B1DCDAF
    assert splitmix64(0, 1) == 0x6E789E6AA1B965F4
    assert splitmix64(0, 2) == 0x06C45D188009454F


@given(st.integers(0, 2**63), st.integers(0, 10**6))
def test_splitmix64_range(seed, i):
    assert 0 <= splitmix64(seed, i) < 2**64


def test_lifecycle_windows():
    hours = [lifecycle_hours(i) for i in range(400)]
    assert all(0 <= h <= 100 for h in hours)
    low = sum(h <= 10 for h in hours)
    high = sum(h >= 90 for h in hours)
    assert abs(low - 120) <= 4 and abs(high - 120) <= 4


def test_default_campaign_is_balanced():
    camp = default_campaign(trials_per_class=100)
    classes = Counter(sc.item.item_class for sc in camp.scenarios)
    assert classes == {c: 100 for c in ItemClass}
    orientations = Counter(sc.item.orientation_rad for sc in camp.scenarios)
    assert len(orientations) == 4 and set(orientations.values()) == {100}
    names = {sc.item.name for sc in camp.scenarios}
    assert names == set(ITEMS_BY_NAME)


def small(seed=0, **kw):
    camp = default_campaign(seed, trials_per_class=2, **kw)
    return Campaign(camp.scenarios, seed, 0.05, config=camp.config)


def test_campaign_is_deterministic():
    assert run_campaign(small(3)) == run_campaign(small(3))
    assert run_campaign(small(3)) != run_campaign(small(4))


def test_worker_count_does_not_change_results():
    assert run_campaign(small(5), workers=2) == run_campaign(small(5), workers=1)


def test_streaming_matches_batch():
    assert list(iter_campaign(small(1))) == run_campaign(small(1))


def test_infeasible_scenario_is_reported_in_place():
    item = ITEMS_BY_NAME["tin"]
    wide = type(item)(**{**item.__dict__, "width_m": 0.2})
    camp = Campaign((Scenario(0, item), Scenario(1, wide), Scenario(2, item)), 0, 0.05)
    out = run_campaign(camp)
    assert isinstance(out[1], ScenarioError) and out[1].trial_id == 1
    assert [o.trial_meta.trial_id for o in (out[0], out[2])] == [0, 2]


@pytest.mark.slow
def test_golden_drop_rate(golden_run):
    report = golden_run["report"]
    row = next(r for r in report["rows"] if r["requirement_id"] == "RQ1.4")
    dropped = 1 - row["verdict"]["point_estimate"]
    assert dropped <= 0.05


def test_faults_reach_the_traces():
    out = run_campaign(small(0, faults=Faults(collision_bug=True)))
    assert all(any(e.kind is EventKind.COLLISION for e in t.events) for t in out)
    assert all(dict(t.trial_meta.faults)["collision_bug"] for t in out)
