import math

import pytest

from parabolic_weingarten import acceptance
from parabolic_weingarten.params import GaussConstant, LinearPrincipal

# lines collected by test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[1].split(".")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def curves():
    """Traces shared across test modules, keyed by a short name."""
    def get(name):
        table = {
            "K1": (GaussConstant(1.0), 0.0),
            "K0.5": (GaussConstant(0.5), 0.0),
            "K0": (GaussConstant(0.0), 0.0),
            "K-0.25": (GaussConstant(-0.25), 0.0),
            "K-0.5": (GaussConstant(-0.5), 0.0),
            "K-1": (GaussConstant(-1.0), 0.0),
            "K-2": (GaussConstant(-2.0), 0.0),
            "K0pi4": (GaussConstant(0.0), math.pi / 4),
            "K-0.25pi4": (GaussConstant(-0.25), math.pi / 4),
            "LW1,2": (LinearPrincipal(1.0, 2.0), 0.0),
            "LW3,1": (LinearPrincipal(3.0, 1.0), 0.0),
            "LW2,0": (LinearPrincipal(2.0, 0.0), 0.0),
            "LW-2,1": (LinearPrincipal(-2.0, 1.0), 0.0),
            "LW-2,3": (LinearPrincipal(-2.0, 3.0), math.pi / 2),
            "LW.5,.5": (LinearPrincipal(0.5, 0.5), 0.0),
        }
        spec, th = table[name]
        return acceptance.curve_for(spec, th)
    return get
