from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from graphs import corpus

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def graph_corpus():
    return corpus()


def pytest_terminal_summary(terminalreporter):
    from scoreboard import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
