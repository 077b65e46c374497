"""Shared pytest configuration: hypothesis profile and criterion summary.

The acceptance tests register one line per criterion through
``record_criterion``; a terminal-summary hook replays them at the end of
the run so the pass/fail state of every criterion is visible even when
pytest captures per-test output.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


CRITERION_LINES: list[str] = []


def record_criterion(num: int, passed: bool, detail: str) -> None:
    """Print and remember one acceptance-criterion result line."""
    line = f"CRITERION {num:2d}: {'PASS' if passed else 'FAIL'} - {detail}"
    CRITERION_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(set(CRITERION_LINES)):
            terminalreporter.line(line)
