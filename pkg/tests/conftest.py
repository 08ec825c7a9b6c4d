import pytest

CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str, elapsed: float, limit: float):
        timely = elapsed < limit
        status = "PASS" if ok and timely else "FAIL"
        line = f"criterion {number:2d}: {status}  {detail}  [{elapsed:.1f}s / {limit:g}s]"
        CRITERIA[number] = line
        print(line)
        assert ok, line
        assert timely, line

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
