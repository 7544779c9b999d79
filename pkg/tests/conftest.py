import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[_RESULTS] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and not report.failed):
        return
    number, title = mark.args
    results = item.config.stash[_RESULTS]
    prev = results.get(number)
    if prev is not None and not prev[1]:
        return  # first failure sticks
    msg = ""
    if report.failed:
        crash = getattr(report.longrepr, "reprcrash", None)
        msg = crash.message.splitlines()[0] if crash is not None else str(report.longrepr)[:120]
    results[number] = (title, report.passed, msg)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed, msg = results[number]
        line = f"criterion {number:2d}  {'PASS' if passed else 'FAIL'}  {title}"
        if msg:
            line += f"  ({msg[:140]})"
        terminalreporter.write_line(line)
