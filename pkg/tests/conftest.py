import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

from qrframes.groups import ConfigSpace, CyclicGroup
from qrframes.models import ModelSpace


@pytest.fixture
def z16():
    return CyclicGroup(16)


@pytest.fixture
def lattice16():
    return ModelSpace(ConfigSpace.regular(CyclicGroup(16)), 2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
