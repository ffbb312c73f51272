import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion checked by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        text = marker.args[1]
        if hasattr(item, "callspec"):
            text += f" [{item.callspec.id}]"
        _criteria.append((marker.args[0], text, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, text, outcome in sorted(_criteria, key=lambda c: c[0]):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{label:<5} {verdict}  {text}")
