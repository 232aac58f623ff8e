import os

import pytest
from hypothesis import HealthCheck, settings

from kchange.problems import Family, ProblemKind, build_problem

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LONG_RUN = os.environ.get("KCHANGE_LONG_RUN") == "1"


@pytest.fixture(scope="session")
def problem():
    """build_problem with a session-wide memo; specs are immutable."""
    memo = {}

    def get(family, n, d=None):
        kind = ProblemKind(Family(family), n, d)
        if kind not in memo:
            memo[kind] = build_problem(kind)
        return memo[kind]

    return get



def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines after the run, whatever the capture mode."""
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
