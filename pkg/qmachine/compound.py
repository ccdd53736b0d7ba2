"""
Two quantum machines coupled by a rigid rod.

Both particles start in the centre of their ball and are joined by a
rigid rod through the centres. Measuring one side pulls its particle to
``a`` or ``-a``; the rod drags the other particle to the antipodal point,
from where the second machine is measured along ``b``. The resulting
product correlation is ``E(a, b) = -<a, b>``, the singlet correlation,
so CHSH reaches 2 sqrt(2).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .exceptions import DomainError
from .geometry import Direction
from .hilbert import singlet_correlation
from .machine import BallPoint, MachineExperiment, Outcome, sample_measurement
from .sampling import derive_seed, run_sharded, validate_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RodModel:
    """Initial state of the coupled machines: both particles in the centre."""
    first: BallPoint = field(default_factory=BallPoint.center)
    second: BallPoint = field(default_factory=BallPoint.center)

    def __post_init__(self) -> None:
        for name, point in (("first", self.first), ("second", self.second)):
            if point.w.norm() != 0.0:
                raise DomainError("Rod model machines start in the centre", argument=name,
                                  value=point.w.as_tuple(), expected="(0, 0, 0)")

    def sample_pair(
        self,
        a: Direction,
        b: Direction,
        rng: np.random.Generator,
        first_side: int = 1
    ) -> Tuple[Outcome, Outcome]:
        """One coupled run; outcomes are returned as (side 1 along a, side 2 along b)."""
        if first_side == 1:
            leader, follower = (a, self.first), (b, self.second)
        elif first_side == 2:
            leader, follower = (b, self.second), (a, self.first)
        else:
            raise DomainError("first_side must be 1 or 2", argument="first_side",
                              value=first_side)
        lead_outcome, lead_point = sample_measurement(MachineExperiment(leader[0]),
                                                      leader[1], rng)
        # the rod keeps the two particles antipodal
        follow_outcome, _ = sample_measurement(MachineExperiment(follower[0]),
                                               lead_point.antipode(), rng)
        if first_side == 1:
            return lead_outcome, follow_outcome
        return follow_outcome, lead_outcome


@dataclass(frozen=True)
class CorrelationReport:
    a: Direction
    b: Direction
    n: int
    E: float
    seed: int
    count_first_o1: int = 0
    count_second_o1: int = 0

    @property
    def marginals(self) -> Tuple[float, float]:
        return self.count_first_o1 / self.n, self.count_second_o1 / self.n


def sample_correlated_pair(a: Direction, b: Direction, rng: np.random.Generator) -> Tuple[Outcome, Outcome]:
    return RodModel().sample_pair(a, b, rng)


def _correlated_shard(a: Direction, b: Direction, first_side: int):
    lead, follow = (a, b) if first_side == 1 else (b, a)
    cos_ab = lead.v.dot(follow.v)

    def shard(rng: np.random.Generator, size: int):
        # row k holds the two break points of pair k, in the order sample_pair draws them
        breaks = rng.uniform(-1.0, 1.0, size=(size, 2))
        lead_sign = np.where(breaks[:, 0] < 0.0, 1, -1)
        # the follower sits at -lead_sign * lead, so its projection is -lead_sign * <lead, follow>
        follow_sign = np.where(breaks[:, 1] < -lead_sign * cos_ab, 1, -1)
        if first_side == 1:
            first, second = lead_sign, follow_sign
        else:
            first, second = follow_sign, lead_sign
        return (int(np.sum(first * second)),
                int(np.count_nonzero(first == 1)),
                int(np.count_nonzero(second == 1)))

    return shard


def estimate_correlation(
    a: Direction,
    b: Direction,
    n: int,
    seed: int,
    workers: Optional[int] = None,
    first_side: int = 1
) -> CorrelationReport:
    """E = (n++ + n-- - n+- - n-+) / n over n rod-model pairs."""
    if n < 1:
        raise DomainError("Number of pairs must be positive", argument="n", value=n,
                          expected="n >= 1")
    if first_side not in (1, 2):
        raise DomainError("first_side must be 1 or 2", argument="first_side",
                          value=first_side)
    seed = validate_seed(seed)
    shards = run_sharded(n, seed, _correlated_shard(a, b, first_side), workers)
    product_sum = sum(s[0] for s in shards)
    report = CorrelationReport(
        a=a,
        b=b,
        n=n,
        E=product_sum / n,
        seed=seed,
        count_first_o1=sum(s[1] for s in shards),
        count_second_o1=sum(s[2] for s in shards)
    )
    logger.debug(f"estimate_correlation: n={n}, seed={seed}, E={report.E:.6f}")
    return report


def quantum_correlation(a: Direction, b: Direction) -> float:
    """Singlet-state prediction for the same settings."""
    return singlet_correlation(a, b)


def chsh_terms(
    a: Direction,
    a2: Direction,
    b: Direction,
    b2: Direction,
    n: int,
    seed: int,
    workers: Optional[int] = None
) -> Tuple[CorrelationReport, CorrelationReport, CorrelationReport, CorrelationReport]:
    """E(a,b), E(a,b'), E(a',b), E(a',b'), each on its own derived stream."""
    seed = validate_seed(seed)
    settings = ((a, b), (a, b2), (a2, b), (a2, b2))
    return tuple(
        estimate_correlation(x, y, n, derive_seed(seed, index), workers)
        for index, (x, y) in enumerate(settings)
    )


def chsh_value(
    a: Direction,
    a2: Direction,
    b: Direction,
    b2: Direction,
    n: int,
    seed: int,
    workers: Optional[int] = None
) -> float:
    """S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|."""
    e_ab, e_ab2, e_a2b, e_a2b2 = (r.E for r in chsh_terms(a, a2, b, b2, n, seed, workers))
    s = abs(e_ab - e_ab2) + abs(e_a2b + e_a2b2)
    logger.info(f"CHSH S = {s:.6f} (quantum bound {2 * math.sqrt(2):.6f}), n={n}, seed={seed}")
    return s
