import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the summary table."""

    def record(number, passed, detail):
        _CRITERIA[number] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
