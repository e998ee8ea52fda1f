import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from remotetrack import experiments as ex  # noqa: E402

_criteria = {}


@pytest.fixture(scope="session")
def scenarios():
    return ex.SCENARIOS


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_criteria.items()):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
