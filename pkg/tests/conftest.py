import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def ctx256():
    from lindep.numerics import PrecisionContext

    return PrecisionContext(256)


@pytest.fixture
def ctx1024():
    from lindep.numerics import PrecisionContext

    return PrecisionContext(1024)


# -- acceptance summary ---------------------------------------------------------

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, passed, detail, seconds, limit)."""

    def record(number, passed, detail, seconds, limit):
        ok = bool(passed) and seconds < limit
        _CRITERIA[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail} ({seconds:.1f}s, limit {limit:.0f}s)"
        print(_CRITERIA[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
