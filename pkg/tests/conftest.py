import numpy as np
import pytest

from twotoone.gf_core import field_create

CRITERIA = {
    1: "counting table ratios n=1..8",
    2: "brute-force count n<=3",
    3: "Walsh statistic vs census corpus",
    4: "GF(5) cubic sweep",
    5: "degree-4 classification sweeps",
    6: "construction soundness and negative paths",
    7: "catalog families",
    8: "applications",
    9: "property suites",
}

_results: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n in getattr(report, "criteria", ()):
        _results.setdefault(n, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criteria = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        outs = _results.get(n)
        if outs is None:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  ({CRITERIA[n]}, {len(outs or [])} checks)")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def F8():
    return field_create(2, 3)


@pytest.fixture(scope="session")
def F16():
    return field_create(2, 4)


@pytest.fixture(scope="session")
def F5():
    return field_create(5)


@pytest.fixture(scope="session")
def F9():
    return field_create(3, 2)
