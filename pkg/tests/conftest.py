import pytest

from isogeo.models import registry_get
from isogeo.models.geometry import jet, sample_points


@pytest.fixture(scope="session")
def g3():
    return registry_get("g3-cartan")


@pytest.fixture(scope="session")
def g3_jets(g3):
    return [jet(g3, p) for p in sample_points(g3, 4, seed=3)]


@pytest.fixture(scope="session")
def g2_jets():
    spec = registry_get("g2-product")
    return [jet(spec, p) for p in sample_points(spec, 3, seed=5)]


@pytest.fixture(scope="session")
def g2_wide_jets():
    spec = registry_get("g2-product", d1=2, d2=3, theta=0.6)
    return [jet(spec, p) for p in sample_points(spec, 2, seed=11)]


# -- acceptance summary: one line per criterion ------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    _ACCEPTANCE[number] = (title, rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, duration = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {title} ({duration:.2f} s)")
