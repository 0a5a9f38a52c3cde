import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# family grid shared by the moment, determinantal and verification suites
GRID = [
    ("lag1", 0.5, None),
    ("lag1", 1.5, None),
    ("lag2", 0.5, None),
    ("lag2", 1.5, None),
    ("lag3", -0.25, None),
    ("lag3", -0.75, None),
    ("jacobi", 2.0, 4.0),
    ("jacobi", 0.5, 1.5),
    ("jacobi", -0.5, -0.25),
]


def grid_id(entry):
    kind, a, b = entry
    return f"{kind}({a})" if b is None else f"{kind}({a},{b})"


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
