"""Shared fixtures; collects acceptance verdicts for the terminal summary."""
import pytest

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    def report(number: int, ok: bool | None, detail: str) -> bool:
        verdict = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        line = f"criterion {number:2d}: {verdict}  {detail}"
        ACCEPTANCE[number] = line
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
