import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

import acceptance_report
from trapdoor.channel import channel_pair, invert_channel_matrix


def pytest_terminal_summary(terminalreporter):
    """Replay the acceptance pass/fail lines uncaptured at the end of the run."""
    if not acceptance_report.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok, detail in acceptance_report.RESULTS:
        status = "PASS" if ok else "FAIL"
        suffix = f" -- {detail}" if detail else ""
        terminalreporter.write_line(f"[criterion {num}] {status}: {label}{suffix}")


@pytest.fixture(scope="session")
def pairs():
    """Lazily cached (P(n,0), P(n,1)) pairs shared across the session."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = channel_pair(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def inverses(pairs):
    """Lazily cached exact inverses keyed by (n, s0)."""
    cache = {}

    def get(n, s0):
        if (n, s0) not in cache:
            cache[(n, s0)] = invert_channel_matrix(pairs(n)[s0])
        return cache[(n, s0)]

    return get
