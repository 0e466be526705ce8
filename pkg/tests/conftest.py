import pytest

from lloydsim.engine import Event, EventKind, Process, Simulation


class Recorder(Process):
    """Collects every event of the kinds it is told to watch."""

    def __init__(self, kinds):
        self.subscriptions = tuple(kinds)
        self.seen = []
        for kind in kinds:
            setattr(self, kind.handler, self.seen.append)


@pytest.fixture
def recorder():
    return Recorder


@pytest.fixture
def sim():
    return Simulation(end_day=400, seed=0)


# Acceptance verdicts, printed once at the end of the session.
CRITERIA: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(CRITERIA, key=lambda c: (int(c[1:].rstrip("abc")), c)):
        ok, detail = CRITERIA[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {cid}: {detail}")
