import subprocess
import sys

import pytest

_CRITERION_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def _record(num: int, passed: bool, detail: str):
        line = f"[criterion {num:02d}] {'PASS' if passed else 'FAIL'} {detail}"
        _CRITERION_LINES.append(line)
        print(line)
        assert passed, line

    return _record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def runner_outputs(tmp_path_factory):
    """Real runner CSVs, generated through the public command line only."""
    dirs = {}
    for preset in ("example51", "example52_hessian"):
        out = tmp_path_factory.mktemp(preset)
        proc = subprocess.run(
            [sys.executable, "-m", "pdflow", "preset", preset,
             "--out", str(out), "--horizon", "100"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        dirs[preset] = out
    return dirs
