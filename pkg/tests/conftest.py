import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, with the measured detail."""
    import re

    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", rep.nodeid)
            if not m:
                continue
            if outcome == "passed" and rep.when != "call":
                continue
            detail = dict(rep.user_properties).get("detail", "")
            verdict = "PASS" if outcome == "passed" else "FAIL"
            rows[int(m.group(1))] = f"criterion {int(m.group(1)):2d}: {verdict}  {m.group(2)}  {detail}"
    if rows:
        terminalreporter.section("acceptance criteria")
        for k in sorted(rows):
            terminalreporter.write_line(rows[k])
