import json
import sys
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

sys.path.insert(0, str(Path(__file__).parent))

from gripcheck.catalog import builtin_catalog  # noqa: E402
from gripcheck.cli import main  # noqa: E402
from gripcheck.monitor import evaluate  # noqa: E402
from gripcheck.sim.campaign import default_campaign, iter_campaign  # noqa: E402
from gripcheck.sim.trial import Faults, ScenarioError  # noqa: E402

DATA = Path(__file__).parent / "data"
GOLDEN_SEED = 0

FAULTS = {
    "overpressure": Faults(overpressure=True),
    "degradation": Faults(degradation_slope=0.001),
    "collision_bug": Faults(collision_bug=True),
    "speed_violation": Faults(speed_violation=True),
}

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion; printed in the terminal summary."""
    def record(number: int, ok: bool, message: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {message}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


@pytest.fixture(scope="session")
def golden_run(tmp_path_factory):
    """The golden campaign through the CLI: simulate, then verify."""
    root = tmp_path_factory.mktemp("golden")
    runner = CliRunner()
    t0 = time.perf_counter()
    sim = runner.invoke(main, ["simulate", "--config", str(DATA / "golden.toml"),
                               "--seed", str(GOLDEN_SEED), "--out", str(root / "traces")])
    t1 = time.perf_counter()
    ver = runner.invoke(main, ["verify", "--traces", str(root / "traces"),
                               "--report", str(root / "report.json")])
    t2 = time.perf_counter()
    report = json.loads((root / "report.json").read_text()) if (root / "report.json").exists() else None
    return {
        "root": root,
        "traces": root / "traces",
        "simulate": sim,
        "verify": ver,
        "report": report,
        "simulate_s": t1 - t0,
        "verify_s": t2 - t1,
    }


def statuses_from_report(report) -> dict:
    return {row["requirement_id"]: row["verdict"]["status"] for row in report["rows"]}


_FAULT_CACHE: dict = {}


def fault_verdicts(name: str) -> tuple[dict, dict, float]:
    """(status by id, verdict by id, seconds) for one seeded fault campaign, computed once."""
    if name not in _FAULT_CACHE:
        t0 = time.perf_counter()
        campaign = default_campaign(GOLDEN_SEED, faults=FAULTS[name])
        traces = (r for r in iter_campaign(campaign) if not isinstance(r, ScenarioError))
        results = evaluate(builtin_catalog(), traces)
        elapsed = time.perf_counter() - t0
        _FAULT_CACHE[name] = ({r.requirement.id: r.verdict.status.value for r in results},
                              {r.requirement.id: r.verdict for r in results}, elapsed)
    return _FAULT_CACHE[name]
