"""Shared pytest plumbing.

The acceptance suite records one verdict line per criterion.  Those lines are
replayed in the terminal summary so a plain ``pytest`` run always shows the
gate results, even though pytest captures stdout inside the tests.
"""

_GATE_LINES: list[tuple[int, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
    _GATE_LINES.append((number, line))
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _GATE_LINES:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_GATE_LINES):
        terminalreporter.write_line(line)
