import pytest

from steercrlb.radial import make_profile


@pytest.fixture(scope="session")
def meyer():
    return make_profile("meyer")


@pytest.fixture(scope="session")
def shannon():
    return make_profile("shannon")


@pytest.fixture(scope="session")
def simoncelli():
    return make_profile("simoncelli")


@pytest.fixture(scope="session")
def log_profile():
    return make_profile("log", 2.0)


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(RESULTS):
            terminalreporter.write_line(line)
