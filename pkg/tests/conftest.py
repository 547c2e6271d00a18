import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from transoval.field import standard_config  # noqa: E402
from transoval.ovals import OvalSpec, forward_construct  # noqa: E402
from transoval.reconstruct import reconstruct_spread  # noqa: E402


@pytest.fixture(scope="session")
def cfg4():
    return standard_config(2)


@pytest.fixture(scope="session")
def cfg8():
    return standard_config(3)


@pytest.fixture(scope="session")
def conf4(cfg4):
    return forward_construct(OvalSpec(cfg4, 1))


@pytest.fixture(scope="session")
def conf8(cfg8):
    return forward_construct(OvalSpec(cfg8, 1))


@pytest.fixture(scope="session")
def conf8n5(cfg8):
    return forward_construct(OvalSpec(cfg8, 5))


@pytest.fixture(scope="session")
def rec4(conf4):
    return reconstruct_spread(conf4)


@pytest.fixture(scope="session")
def rec8(conf8):
    return reconstruct_spread(conf8, check_axioms=False)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
