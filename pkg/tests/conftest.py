import pytest

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n = mark.args[0]
    status = "PASS" if rep.passed else "FAIL"
    notes = [str(v) for k, v in item.user_properties if k == "detail"]
    detail = "; ".join(notes)
    if rep.failed and call.excinfo is not None and not detail:
        detail = (str(call.excinfo.value).splitlines() or [""])[0][:200]
    _CRITERIA[n] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, detail = _CRITERIA[n]
        line = f"criterion {n:2d}: {status}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
