import pytest

_ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record one summary line per acceptance criterion: ``criterion(key, passed, detail)``."""

    def record(key: str, passed: bool, detail: str) -> bool:
        _ACCEPTANCE_LINES[key] = f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")

    def order(k):
        num = "".join(c for c in k if c.isdigit())
        return (int(num or 0), k)

    for key in sorted(_ACCEPTANCE_LINES, key=order):
        terminalreporter.write_line(_ACCEPTANCE_LINES[key])
