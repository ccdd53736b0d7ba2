import pytest

from qmachine.geometry import Direction
from qmachine.machine import BallPoint
from qmachine.spa import build_spin_sps
from .utils import axis


@pytest.fixture
def z_up() -> Direction:
    return axis(0.0, 0.0, 1.0)


@pytest.fixture
def spin4():
    """Four directions closed under negation plus the centre of the ball."""
    dirs = [axis(1.0, 0.0, 0.0), axis(-1.0, 0.0, 0.0), axis(0.0, 0.0, 1.0), axis(0.0, 0.0, -1.0)]
    return build_spin_sps(dirs, interior=[BallPoint.center()])
