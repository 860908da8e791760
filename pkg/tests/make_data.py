"""Regenerate the checked-in test data under tests/data.

    python3 tests/make_data.py            # corpus, catalog copy, golden config
    python3 tests/make_data.py --report   # also rerun the golden campaign for the golden report
"""

import shutil
import sys
import tempfile
from importlib import resources
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from click.testing import CliRunner  # noqa: E402

from corpus import corpus_text  # noqa: E402
from gripcheck.catalog import catalog_text  # noqa: E402
from gripcheck.cli import main  # noqa: E402
from gripcheck.sim.items import ITEMS_BY_NAME  # noqa: E402
from gripcheck.sim.trial import Scenario, run_trial  # noqa: E402
from gripcheck.trace import dumps_trace  # noqa: E402
from tracegen import random_trace  # noqa: E402

DATA = HERE / "data"
CORPUS = DATA / "corpus"


def write_corpus():
    if CORPUS.exists():
        shutil.rmtree(CORPUS)
    (CORPUS / "gspec").mkdir(parents=True)
    (CORPUS / "traces").mkdir(parents=True)
    for i in range(49):
        (CORPUS / "gspec" / f"doc_{i:02d}.gspec").write_text(corpus_text(i), encoding="utf-8")
    (CORPUS / "gspec" / "doc_49.gspec").write_text(catalog_text(), encoding="utf-8")
    for i in range(48):
        (CORPUS / "traces" / f"trace_{i:02d}.jsonl").write_text(dumps_trace(random_trace(i)), encoding="utf-8")
    for i, name in enumerate(["egg", "strawberry"], start=48):
        trace = run_trial(Scenario(i, ITEMS_BY_NAME[name]), seed=i, sample_period=0.05)
        (CORPUS / "traces" / f"trace_{i:02d}.jsonl").write_text(dumps_trace(trace), encoding="utf-8")


def write_fixed():
    (DATA / "catalog.gspec").write_text(catalog_text(), encoding="utf-8")
    golden = resources.files("gripcheck.data").joinpath("golden.toml").read_text("utf-8")
    (DATA / "golden.toml").write_text(golden, encoding="utf-8")


def write_golden_report():
    with tempfile.TemporaryDirectory() as tmp:
        runner = CliRunner()
        runner.invoke(main, ["simulate", "--config", str(DATA / "golden.toml"), "--seed", "0",
                             "--out", f"{tmp}/traces"], catch_exceptions=False)
        result = runner.invoke(main, ["verify", "--traces", f"{tmp}/traces", "--report",
                                      str(DATA / "golden_report.json")])
        print("verify exit", result.exit_code)


if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    write_corpus()
    write_fixed()
    if "--report" in sys.argv:
        write_golden_report()
