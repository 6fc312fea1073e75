"""Shared pytest wiring: prints the acceptance scoreboard after a run."""

from . import acceptance_log


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_log.drain()
    if not lines:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
