import sys
from importlib import resources
from pathlib import Path

import pytest

from tntagger.corpus import read_tagged

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURE_A = HERE / "fixtures" / "fixture_a.tt"


def sample_path() -> Path:
    return Path(str(resources.files("tntagger") / "data" / "sample.tt"))


@pytest.fixture(scope="session")
def fixture_a():
    return read_tagged(FIXTURE_A)


@pytest.fixture(scope="session")
def sample_corpus():
    return read_tagged(sample_path())


# one summary line per acceptance criterion -------------------------------
_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.skipped or report.failed:
        outcome = "SKIP" if report.skipped else "FAIL" if report.failed else "PASS"
        detail = props.get("detail", "")
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2].removeprefix("Skipped: ")
        _CRITERIA[props["criterion"]] = (outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        outcome, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {outcome}  {detail}")
