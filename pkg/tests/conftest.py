"""Shared pytest plumbing: the acceptance checklist summary."""

_checklist: list[str] = []


def record_checklist(line: str) -> None:
    """Queue one acceptance line for the end-of-run summary."""
    _checklist.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _checklist:
        terminalreporter.section("acceptance checklist")
        for line in _checklist:
            terminalreporter.write_line(line)
