import pytest

_CRITERIA: dict[str, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    cid, title = marker.args
    previous = _CRITERIA.get(cid)
    if previous is None or previous[1] == "passed":
        _CRITERIA[cid] = (title, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c[1:])):
        title, outcome, duration = _CRITERIA[cid]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{cid} {title}: {verdict} ({duration:.2f} s)")
