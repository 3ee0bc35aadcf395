import numpy as np
import pytest

from rmf.fronts import FrontShape, FrontSpec, generate_front


@pytest.fixture
def convex_ref():
    return generate_front(FrontSpec(FrontShape.CONVEX_SQRT, 101, (0.0, 1.0)))


@pytest.fixture
def concave_ref():
    return generate_front(FrontSpec(FrontShape.CONCAVE_QUAD, 101, (0.0, 1.0)))


@pytest.fixture
def linear_ref():
    return generate_front(FrontSpec(FrontShape.LINEAR, 101, (0.0, 1.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion gate")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    results = item.config._acceptance
    prev = results.get(number, (title, True))
    failed = report.failed or (report.when == "call" and report.skipped)
    results[number] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
