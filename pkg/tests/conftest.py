"""Shared pytest hooks: collect acceptance-criterion lines for the run summary."""

_criterion_lines: list[str] = []


def record_criterion(number: int, name: str, status: str, detail: str = "") -> None:
    """Remember one acceptance-criterion outcome for the terminal summary."""
    line = f"criterion {number} ({name}): {status}"
    if detail:
        line += f"  [{detail}]"
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_criterion_lines):
        terminalreporter.write_line(line)
