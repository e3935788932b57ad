"""Shared pytest hooks: collect acceptance-criterion verdicts and print one
pass/fail line per criterion in the terminal summary (survives output
capture, so the lines always appear in plain ``pytest -v`` runs)."""

_CRITERION_LINES = []


def record_criterion(number: int, name: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    _CRITERION_LINES.append((number, f"criterion {number} ({name}): {status} - {detail}"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for _, line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)
