import pytest

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label = marker.args[0]
    status = "PASS" if call.excinfo is None else "FAIL"
    detail = f"{call.duration:.2f}s"
    if call.excinfo is not None:
        detail += f", {call.excinfo.typename}: {str(call.excinfo.value).splitlines()[0][:160]}"
    _CRITERIA[label] = (status, detail)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): an acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: (int(s.split()[0].rstrip("ab")), s)):
        status, detail = _CRITERIA[label]
        terminalreporter.write_line(f"{status}  criterion {label}  ({detail})")


@pytest.fixture
def within():
    """Assert that a block finishes inside a time limit."""
    import time
    from contextlib import contextmanager

    @contextmanager
    def limit(seconds):
        start = time.perf_counter()
        yield
        spent = time.perf_counter() - start
        assert spent < seconds, f"took {spent:.2f}s, limit {seconds}s"

    return limit
