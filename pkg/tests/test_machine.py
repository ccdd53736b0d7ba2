import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmachine.constants import CONTINUITY_TOLERANCE
from qmachine.exceptions import DomainError
from qmachine.geometry import Direction, angle_between
from qmachine.machine import (BallPoint, MachineExperiment, Outcome, apply_break,
                              classical_outcome, count_o1, epsilon_probability, run_trials,
                              sample_measurement, transition_probability)
from qmachine.sampling import make_generator
from . import strategies


def surface_at(gamma: float) -> BallPoint:
    return BallPoint.surface(Direction.from_angles(gamma, 0.0))


def on_axis(u: Direction, x: float) -> BallPoint:
    return BallPoint(u.v * x)


def test_transition_probability_examples(z_up: Direction) -> None:
    assert transition_probability(z_up, BallPoint.surface(z_up)) == (1.0, 0.0)
    assert transition_probability(z_up, BallPoint.center()) == (0.5, 0.5)
    assert transition_probability(z_up, surface_at(math.pi / 3)) == pytest.approx((0.75, 0.25),
                                                                                abs=1e-12)


@given(strategies.directions, strategies.ball_points)
def test_probabilities_sum_to_one(u: Direction, w: BallPoint) -> None:
    mu1, mu2 = transition_probability(u, w)

    assert 0.0 <= mu1 <= 1.0
    assert mu1 + mu2 == pytest.approx(1.0, abs=1e-15)


@given(strategies.directions, strategies.surface_points)
def test_surface_states_follow_the_half_angle_law(u: Direction, w: BallPoint) -> None:
    gamma = angle_between(u.v, w.w)
    mu1, _ = transition_probability(u, w)

    assert abs(mu1 - math.cos(gamma / 2.0) ** 2) <= 1e-12


@pytest.mark.parametrize("epsilon, x, expected", [
    (0.5, 0.9, (1.0, 0.0)),
    (0.5, -0.9, (0.0, 1.0)),
    (0.5, 0.25, (0.75, 0.25)),
    (0.5, 0.5, (1.0, 0.0)),
])
def test_epsilon_probability_examples(z_up: Direction, epsilon: float, x: float, expected) -> None:
    e = MachineExperiment(z_up, epsilon)

    assert epsilon_probability(e, on_axis(z_up, x)) == pytest.approx(expected, abs=1e-12)


@given(strategies.directions, strategies.ball_points)
def test_unit_elastic_is_the_quantum_elastic(u: Direction, w: BallPoint) -> None:
    assert epsilon_probability(MachineExperiment(u), w) == pytest.approx(
        transition_probability(u, w), abs=1e-12)


@given(strategies.epsilons, st.lists(strategies.projections, min_size=2, max_size=10))
def test_epsilon_probability_is_monotone(epsilon: float, xs) -> None:
    u = Direction.from_angles(0.0, 0.0)
    e = MachineExperiment(u, epsilon)
    mus = [epsilon_probability(e, on_axis(u, x))[0] for x in sorted(xs)]

    assert all(a <= b for a, b in zip(mus, mus[1:]))


@given(strategies.epsilons)
def test_epsilon_probability_is_continuous_at_the_edges(epsilon: float) -> None:
    u = Direction.from_angles(0.0, 0.0)
    e = MachineExperiment(u, epsilon)
    for edge in (-epsilon, epsilon):
        inside = edge * (1.0 - 1e-12)
        at_edge, _ = epsilon_probability(e, on_axis(u, edge))
        near_edge, _ = epsilon_probability(e, on_axis(u, inside))
        assert abs(at_edge - near_edge) <= CONTINUITY_TOLERANCE


def test_tiny_elastic_is_deterministic(z_up: Direction) -> None:
    e = MachineExperiment(z_up, 1e-6)
    for x in (-0.5, -0.01, 0.01, 0.5):
        report = run_trials(e, on_axis(z_up, x), 10_000, seed=3)
        assert report.count_o1 == (report.n_trials if x > 0 else 0)
        assert classical_outcome(z_up, on_axis(z_up, x)) is (Outcome.O1 if x > 0 else Outcome.O2)


def test_classical_outcome_is_undetermined_on_the_equator(z_up: Direction) -> None:
    assert classical_outcome(z_up, BallPoint.center()) is None


def test_apply_break_examples(z_up: Direction) -> None:
    center = BallPoint.center()

    outcome, state = apply_break(z_up, center, -1.0 + 1e-9)
    assert outcome is Outcome.O1 and state == BallPoint.surface(z_up)

    outcome, state = apply_break(z_up, center, 0.99)
    assert outcome is Outcome.O2 and state == BallPoint.surface(-z_up)


def test_apply_break_tie_goes_to_o2(z_up: Direction) -> None:
    outcome, _ = apply_break(z_up, on_axis(z_up, 0.5), 0.5)

    assert outcome is Outcome.O2


def test_eigenstate_is_forced(z_up: Direction) -> None:
    w = BallPoint.surface(z_up)
    for b in np.linspace(-1.0, 1.0, 1000, endpoint=False):
        outcome, state = apply_break(z_up, w, float(b))
        assert outcome is Outcome.O1
        assert state == w


@pytest.mark.parametrize("break_point", [-1.0 - 1e-9, 1.5])
def test_apply_break_range(z_up: Direction, break_point: float) -> None:
    with pytest.raises(DomainError):
        apply_break(z_up, BallPoint.center(), break_point)


@pytest.mark.parametrize("x", [-0.6, 0.0, 0.3])
def test_even_break_points_reproduce_the_probability(z_up: Direction, x: float) -> None:
    n = 100_000
    w = on_axis(z_up, x)
    breaks = -1.0 + (np.arange(n) + 0.5) * (2.0 / n)
    hits = sum(apply_break(z_up, w, float(b))[0] is Outcome.O1 for b in breaks)
    mu1, _ = epsilon_probability(MachineExperiment(z_up), w)

    assert abs(hits / n - mu1) <= 2.0 / n


def test_sample_measurement_on_eigenstate(z_up: Direction) -> None:
    rng = make_generator(5)
    e = MachineExperiment(z_up)
    w = BallPoint.surface(z_up)

    assert all(sample_measurement(e, w, rng)[0] is Outcome.O1 for _ in range(1000))


def test_count_o1_uses_the_same_draws(z_up: Direction) -> None:
    e = MachineExperiment(z_up, 0.7)
    w = on_axis(z_up, 0.2)
    rng = make_generator(9)
    scalar = sum(sample_measurement(e, w, rng)[0] is Outcome.O1 for _ in range(500))

    assert count_o1(e, w, make_generator(9), 500) == scalar


@pytest.mark.parametrize("seed, gamma, low, high", [
    (42, math.pi / 2, 0.498, 0.502),
    (42, math.pi / 3, 0.748, 0.752),
])
def test_frequencies_at_one_million_trials(z_up: Direction, seed: int, gamma: float,
                                           low: float, high: float) -> None:
    report = run_trials(MachineExperiment(z_up), surface_at(gamma), 10 ** 6, seed)

    assert low <= report.freq_o1 <= high


@pytest.mark.parametrize("gamma", [0.0, math.pi / 6, math.pi / 3, math.pi / 2,
                                   2 * math.pi / 3, math.pi])
def test_cos_squared_law(z_up: Direction, gamma: float) -> None:
    report = run_trials(MachineExperiment(z_up), surface_at(gamma), 10 ** 6, seed=1)

    assert abs(report.freq_o1 - math.cos(gamma / 2) ** 2) <= 0.002


def test_run_trials_center_and_epsilon(z_up: Direction) -> None:
    center = run_trials(MachineExperiment(z_up), BallPoint.center(), 10 ** 6, seed=7)
    narrow = run_trials(MachineExperiment(z_up, 0.5), on_axis(z_up, 0.25), 10 ** 6, seed=7)

    assert abs(center.freq_o1 - 0.5) <= 0.002
    assert abs(narrow.freq_o1 - 0.75) <= 0.002
    assert narrow.epsilon == 0.5
    assert narrow.projection == pytest.approx(0.25)
    assert narrow.analytic_o1 == pytest.approx(0.75)


def test_run_trials_report(z_up: Direction) -> None:
    report = run_trials(MachineExperiment(z_up), BallPoint.surface(z_up), 1, seed=0)

    assert report.count_o1 == 1
    assert report.count_o2 == 0
    assert report.freq_o1 == 1.0


def test_run_trials_needs_trials(z_up: Direction) -> None:
    with pytest.raises(DomainError):
        run_trials(MachineExperiment(z_up), BallPoint.center(), 0, seed=0)


def test_counts_do_not_depend_on_workers(z_up: Direction) -> None:
    e = MachineExperiment(z_up, 0.8)
    w = on_axis(z_up, -0.1)
    n = 5 * 2 ** 16 + 123

    assert run_trials(e, w, n, 11, workers=1) == run_trials(e, w, n, 11, workers=4)


def test_counts_add_up(z_up: Direction) -> None:
    report = run_trials(MachineExperiment(z_up), surface_at(1.0), 70_000, seed=2)

    assert report.count_o1 + report.count_o2 == report.n_trials
    assert report.freq_o1 == report.count_o1 / report.n_trials


def test_ball_point_bounds() -> None:
    u = Direction.from_angles(0.3, 0.2)

    assert BallPoint.surface(u).is_surface()
    assert BallPoint.surface(u).antipode() == BallPoint.surface(-u)
    with pytest.raises(DomainError):
        BallPoint(u.v * 1.01)


@pytest.mark.parametrize("epsilon", [0.0, -0.5, 1.5])
def test_elastic_width_range(z_up: Direction, epsilon: float) -> None:
    with pytest.raises(DomainError):
        MachineExperiment(z_up, epsilon)


def test_outcome_sign() -> None:
    assert Outcome.O1.sign == 1
    assert Outcome.O2.sign == -1
