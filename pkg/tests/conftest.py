import pytest

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test outcome decides PASS/FAIL."""
    entry = {"name": request.node.name, "detail": ""}
    _CRITERIA.append(entry)

    def note(detail):
        entry["detail"] = detail

    yield note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in _CRITERIA:
            if entry["name"] == item.name:
                entry["status"] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _CRITERIA:
        status = entry.get("status", "FAIL")
        terminalreporter.write_line(f"{status}  {entry['name']}  {entry['detail']}")
