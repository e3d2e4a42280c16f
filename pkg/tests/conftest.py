import pytest
from hypothesis import settings

from radcond import harness

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def radiation_report():
    return harness.run_campaign(harness.Campaign("radiation", "radiation"), timestamp="fixed")


@pytest.fixture(scope="session")
def kernels_report():
    return harness.run_campaign(harness.Campaign("kernels", "kernels"), timestamp="fixed")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
