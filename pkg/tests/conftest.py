import random

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption(
        "--stat-seed", type=int, default=None, help="seed for the statistical checks"
    )
    parser.addoption(
        "--fresh-seeds",
        action="store_true",
        help="draw a new random seed for the statistical checks instead of the pinned one",
    )


@pytest.fixture(scope="session")
def stat_seed(request) -> int:
    if request.config.getoption("--fresh-seeds"):
        seed = random.SystemRandom().randrange(2**32)
        print(f"\nstatistical checks seeded with {seed}")
        return seed
    seed = request.config.getoption("--stat-seed")
    return 20260101 if seed is None else seed


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
