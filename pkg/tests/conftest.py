import os

import pytest
from hypothesis import HealthCheck, settings

from wcomm import builders

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = {}


def record(number, title, passed, detail=""):
    CRITERIA[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, passed, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}  {detail}")


@pytest.fixture(scope="session")
def corpus():
    return builders.corpus()


@pytest.fixture(scope="session")
def s3():
    return builders.symmetric(3)


@pytest.fixture(scope="session")
def z8():
    return builders.zn(8)


@pytest.fixture(scope="session")
def f2t3():
    return builders.poly_nilpotent(2, 3)
