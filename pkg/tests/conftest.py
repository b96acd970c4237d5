"""Shared pytest plumbing.

The acceptance tests append one formatted line per criterion to
ACCEPTANCE_LINES; the terminal-summary hook replays them after the run so
the pass/fail ledger is visible regardless of output capturing.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
