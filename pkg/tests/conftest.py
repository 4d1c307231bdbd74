import pytest

# acceptance results, filled in by tests/test_acceptance.py
_CRITERIA: dict[int, dict] = {}


class _Recorder:
    def __init__(self, number: int, title: str):
        self.entry = _CRITERIA.setdefault(number, {"title": title, "notes": [], "outcome": None})

    def note(self, text: str):
        self.entry["notes"].append(text)


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    return _Recorder(*marker.args)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "notes": [], "outcome": None})
    entry["outcome"] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        notes = "; ".join(entry["notes"])
        line = f"criterion {number:2d} {entry['outcome'] or 'NOT RUN':7s} {entry['title']}"
        terminalreporter.write_line(line + (f" ({notes})" if notes else ""))
