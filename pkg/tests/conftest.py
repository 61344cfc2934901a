import pytest

ACCEPTANCE_RESULTS = {}


def pytest_runtest_makereport(item, call):
    crit = item.get_closest_marker("criterion")
    if crit is None or call.when != "call":
        return
    number, title = crit.args
    passed = call.excinfo is None
    ACCEPTANCE_RESULTS[number] = (title, passed and ACCEPTANCE_RESULTS.get(number, (None, True))[1])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}")


@pytest.fixture(scope="session")
def example_scheme():
    from spc_caching import SchemeParams, build_proposed_scheme

    return build_proposed_scheme(SchemeParams(2, 3), N=3)
