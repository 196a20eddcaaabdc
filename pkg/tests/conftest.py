import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    """Store a one-line acceptance summary: record(number, ok, detail)."""

    def _record(num: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[num] = (ok, detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
