"""
The quantum machine.

A point particle sits somewhere in the closed unit ball. An experiment
``e_u`` stretches an elastic from ``u`` to ``-u``, lets the particle fall
orthogonally onto it, and waits for the elastic to break. The two pieces
pull the particle to ``u`` (outcome O1) or to ``-u`` (outcome O2). The
break point is the hidden measurement: once it is fixed the outcome is
deterministic, and all randomness lives in the apparatus.

Example::

    import math
    from qmachine.geometry import Direction
    from qmachine.machine import BallPoint, MachineExperiment, run_trials

    u = Direction.from_angles(0.0, 0.0)
    w = BallPoint.surface(Direction.from_angles(math.pi / 3, 0.0))
    report = run_trials(MachineExperiment(u), w, n=10**6, seed=42)
    report.freq_o1   # close to cos^2(pi/6) = 0.75
"""
import enum
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .constants import UNIT_TOLERANCE
from .exceptions import DomainError
from .geometry import ORIGIN, Direction, Vec3
from .sampling import run_sharded, validate_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BallPoint:
    """A state of the machine: the particle's position in the closed unit ball."""
    w: Vec3

    def __post_init__(self) -> None:
        if self.w.norm() > 1.0 + UNIT_TOLERANCE:
            raise DomainError("Ball point lies outside the unit ball", argument="w",
                              value=self.w.norm(), expected="|w| <= 1")

    @classmethod
    def center(cls) -> "BallPoint":
        return cls(ORIGIN)

    @classmethod
    def surface(cls, u: Direction) -> "BallPoint":
        return cls(u.v)

    def antipode(self) -> "BallPoint":
        return BallPoint(-self.w)

    def is_surface(self) -> bool:
        return abs(self.w.norm() - 1.0) <= UNIT_TOLERANCE


@dataclass(frozen=True)
class MachineExperiment:
    """Experiment e_u performed with an epsilon-elastic (epsilon = 1 is the quantum elastic)."""
    u: Direction
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 1.0:
            raise DomainError("Elastic width out of range", argument="epsilon",
                              value=self.epsilon, expected="0 < epsilon <= 1")


class Outcome(enum.Enum):
    O1 = "o1"
    O2 = "o2"

    @property
    def sign(self) -> int:
        """+1 for O1, -1 for O2."""
        return 1 if self is Outcome.O1 else -1


@dataclass(frozen=True)
class TrialReport:
    n_trials: int
    count_o1: int
    count_o2: int
    freq_o1: float
    analytic_o1: float
    seed: int
    epsilon: float = 1.0
    projection: float = 0.0


def _split(mu1: float) -> Tuple[float, float]:
    mu1 = min(1.0, max(0.0, mu1))
    return mu1, 1.0 - mu1


def transition_probability(u: Direction, w: BallPoint) -> Tuple[float, float]:
    """(mu1, mu2) for the quantum elastic: the O1 piece has length 1 + <u, w> out of 2."""
    return _split((1.0 + u.dot(w.w)) / 2.0)


def epsilon_probability(e: MachineExperiment, w: BallPoint) -> Tuple[float, float]:
    """(mu1, mu2) for an elastic that only breaks on [-epsilon, +epsilon]."""
    x = e.u.dot(w.w)
    eps = e.epsilon
    if x <= -eps:
        return 0.0, 1.0
    if x >= eps:
        return 1.0, 0.0
    return _split((eps + x) / (2.0 * eps))


def classical_outcome(u: Direction, w: BallPoint) -> Optional[Outcome]:
    """Limit epsilon -> 0: the elastic breaks in its centre; None when w projects onto it."""
    x = u.dot(w.w)
    if x > 0.0:
        return Outcome.O1
    if x < 0.0:
        return Outcome.O2
    return None


def apply_break(u: Direction, w: BallPoint, break_point: float) -> Tuple[Outcome, BallPoint]:
    """Deterministic hidden measurement: the outcome once the break point is known."""
    if not -1.0 <= break_point <= 1.0:
        raise DomainError("Break point lies outside the elastic", argument="break_point",
                          value=break_point, expected="[-1, 1]")
    # a tie goes to O2
    if break_point < u.dot(w.w):
        return Outcome.O1, BallPoint.surface(u)
    return Outcome.O2, BallPoint.surface(-u)


def sample_measurement(
    e: MachineExperiment,
    w: BallPoint,
    rng: np.random.Generator
) -> Tuple[Outcome, BallPoint]:
    """Draw a break point uniformly on the breakable segment and apply it."""
    return apply_break(e.u, w, float(rng.uniform(-e.epsilon, e.epsilon)))


def count_o1(e: MachineExperiment, w: BallPoint, rng: np.random.Generator, size: int) -> int:
    """Number of O1 outcomes among ``size`` draws; same draws as ``size`` sample_measurement calls."""
    breaks = rng.uniform(-e.epsilon, e.epsilon, size=size)
    return int(np.count_nonzero(breaks < e.u.dot(w.w)))


def run_trials(
    e: MachineExperiment,
    w: BallPoint,
    n: int,
    seed: int,
    workers: Optional[int] = None
) -> TrialReport:
    """Repeat the experiment ``n`` times on fresh copies of state ``w``."""
    if n < 1:
        raise DomainError("Number of trials must be positive", argument="n", value=n,
                          expected="n >= 1")
    seed = validate_seed(seed)
    counts = run_sharded(n, seed, lambda rng, size: count_o1(e, w, rng, size), workers)
    o1 = sum(counts)
    analytic, _ = epsilon_probability(e, w)
    report = TrialReport(
        n_trials=n,
        count_o1=o1,
        count_o2=n - o1,
        freq_o1=o1 / n,
        analytic_o1=analytic,
        seed=seed,
        epsilon=e.epsilon,
        projection=e.u.dot(w.w)
    )
    logger.debug(f"run_trials: n={n}, seed={seed}, epsilon={e.epsilon}, "
                 f"freq_o1={report.freq_o1:.6f}, analytic={analytic:.6f}")
    return report
