from pathlib import Path

import pytest

from whichpath import Scenario

GOLDEN = Path(__file__).parent / "golden"
DOCS = Path(__file__).parent.parent / "docs" / "examples"


@pytest.fixture
def em_quiet():
    """D_A < T_A < D with both parties spacelike."""
    return Scenario("em", d=0.01, D=1.0, T_A=0.5, T_B=0.5, q_A=1.0, q_B=1.0, m_B=1.0)


@pytest.fixture
def gr_quiet():
    return Scenario("gr", d=0.01, D=1.0, T_A=0.5, T_B=0.5, m_A=10.0)


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and rep.when == "call":
        number, title = marker.args
        _ACCEPTANCE.append((number, title, "PASS" if rep.passed else "FAIL", round(rep.duration, 2)))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    grouped = {}
    for number, title, status, secs in _ACCEPTANCE:
        entry = grouped.setdefault(number, [title, [], 0.0])
        entry[1].append(status)
        entry[2] += secs
    for number in sorted(grouped):
        title, statuses, secs = grouped[number]
        status = "PASS" if all(s == "PASS" for s in statuses) else "FAIL"
        runs = f", {len(statuses)} runs" if len(statuses) > 1 else ""
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({secs:.2f} s{runs})")
