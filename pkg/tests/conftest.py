import pytest

_criteria = {}


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    number, title = marker
    failed = report.failed
    if report.when == "call" or failed:
        detail = dict(report.user_properties).get("detail", "")
        previous = _criteria.get(number)
        ok = not failed and (previous is None or previous[1])
        if previous is not None and previous[2]:
            detail = f"{previous[2]}; {detail}" if detail else previous[2]
        _criteria[number] = (title, ok, detail)


@pytest.fixture(autouse=True)
def _criterion_tag(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        record_property("criterion", tuple(marker.args))


@pytest.fixture
def detail(record_property):
    """Attach a short measurement summary to the current criterion."""
    def note(text):
        record_property("detail", text)
        print(text)
    return note


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, detail = _criteria[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
