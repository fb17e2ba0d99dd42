import pytest

from sensorpoll.field import CorrelationModel, build_field


@pytest.fixture
def line_field():
    return build_field([(1, (0,)), (2, (2.5,)), (3, (6,))], n=5)


@pytest.fixture
def line_model(line_field):
    return CorrelationModel.from_field(line_field)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
