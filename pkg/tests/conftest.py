"""Shared fixtures: session-cached preset batteries and the acceptance report.

The acceptance tests (tests/test_acceptance.py) run the three built-in
experiment presets once per session at their full default horizon and share
the resulting summaries and CSV files across criteria.  Each criterion
records one PASS/FAIL line; the lines are echoed in a terminal summary
block at the end of the run.
"""

from __future__ import annotations

import dataclasses

import pytest

from pdflow import cli

# ---------------------------------------------------------------------------
# acceptance criterion recording
# ---------------------------------------------------------------------------

_CRITERION_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance-criterion verdict line and assert it.

    Usage: criterion(7, ok_bool, "detail"); prints and stores
    '[criterion 07] PASS detail' and fails the test when not ok.
    `expected_fail=True` tags the line XFAIL for assertions that are
    documented not to hold (the test itself must be marked xfail).
    """

    def _record(num: int, passed: bool, detail: str = "", expected_fail: bool = False):
        if passed:
            tag = "PASS"
        else:
            tag = "XFAIL" if expected_fail else "FAIL"
        line = f"[criterion {num:02d}] {tag} {detail}".rstrip()
        _CRITERION_LINES.append(line)
        print(line)
        assert passed, line

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)


# ---------------------------------------------------------------------------
# session battery: the three presets at full horizon
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def battery(tmp_path_factory):
    """Run every preset once (default horizon 10^3), keyed by preset name.

    Values are lists of RunSummary, one per sweep member, in sweep order.
    The example51 sweep integrates ~6M steps for its slowest member, so
    this costs a couple of minutes once per session.
    """
    runs = {}
    for name in cli.PRESET_NAMES:
        out = tmp_path_factory.mktemp(f"battery_{name}")
        cfg = dataclasses.replace(cli.preset(name), out_dir=str(out))
        runs[name] = cli.run(cfg, quiet=True)
    return runs


