import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

# criterion id -> (title, passed, detail)
ACCEPTANCE = {}


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion for the summary."""
    marker = request.node.get_closest_marker("acceptance")
    cid, title = marker.args
    state = {"detail": ""}
    yield state
    failed = getattr(request.node, "rep_call", None)
    passed = failed is not None and failed.passed
    ACCEPTANCE[cid] = (title, passed, state["detail"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda c: int(c.lstrip("AC"))):
        title, passed, detail = ACCEPTANCE[cid]
        status = "PASS" if passed else "FAIL"
        line = f"{status}  {cid}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
