import pytest

from cellplan.geometry import build_layout
from cellplan.planner import Scenario


@pytest.fixture(scope="session")
def scenario():
    return Scenario()


@pytest.fixture(scope="session")
def layout900():
    return build_layout(900.0)


@pytest.fixture(scope="session")
def layout300():
    return build_layout(300.0)
