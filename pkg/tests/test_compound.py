import math

import pytest

from qmachine.compound import (RodModel, chsh_terms, chsh_value, estimate_correlation,
                               quantum_correlation, sample_correlated_pair)
from qmachine.exceptions import DomainError
from qmachine.geometry import Direction, Vec3
from qmachine.machine import BallPoint, Outcome
from qmachine.sampling import make_generator

TSIRELSON = 2 * math.sqrt(2)


def coplanar(theta: float) -> Direction:
    return Direction.from_angles(theta, 0.0)


def test_parallel_settings_always_disagree() -> None:
    a = Direction.from_angles(0.9, 2.0)
    report = estimate_correlation(a, a, 100_000, seed=1)

    assert report.E == -1.0


def test_antiparallel_settings_always_agree() -> None:
    a = Direction.from_angles(0.9, 2.0)
    report = estimate_correlation(a, -a, 100_000, seed=1)

    assert report.E == 1.0


@pytest.mark.parametrize("gamma, seed", [(math.pi / 2, 5), (math.pi / 3, 11)])
def test_correlation_is_minus_cosine(gamma: float, seed: int) -> None:
    report = estimate_correlation(coplanar(0.0), coplanar(gamma), 10 ** 6, seed)

    assert abs(report.E + math.cos(gamma)) <= 0.005


def test_rod_model_matches_the_singlet() -> None:
    angles = [math.pi * k / 9 for k in range(10)]
    for i, alpha in enumerate(angles):
        for j, beta in enumerate(angles):
            a = Direction.from_angles(alpha, 0.3)
            b = Direction.from_angles(beta, 1.1)
            report = estimate_correlation(a, b, 10 ** 6, seed=100 + 10 * i + j)
            assert abs(report.E - quantum_correlation(a, b)) <= 0.005


def test_marginals_are_fair() -> None:
    report = estimate_correlation(coplanar(0.4), coplanar(2.0), 10 ** 6, seed=3)
    first, second = report.marginals

    assert abs(first - 0.5) <= 0.005
    assert abs(second - 0.5) <= 0.005


def test_measurement_order_is_unobservable() -> None:
    a, b = coplanar(0.3), coplanar(1.6)
    expected = quantum_correlation(a, b)
    forward = estimate_correlation(a, b, 10 ** 6, seed=8, first_side=1)
    backward = estimate_correlation(a, b, 10 ** 6, seed=8, first_side=2)

    assert abs(forward.E - expected) <= 0.005
    assert abs(backward.E - expected) <= 0.005


def test_vectorized_estimate_matches_single_pairs() -> None:
    a, b = Direction.from_angles(0.5, 0.2), Direction.from_angles(2.1, 4.0)
    n = 300
    rng = make_generator(21, 0)
    pairs = [RodModel().sample_pair(a, b, rng) for _ in range(n)]
    report = estimate_correlation(a, b, n, seed=21)

    assert report.E == sum(x.sign * y.sign for x, y in pairs) / n
    assert report.count_first_o1 == sum(x is Outcome.O1 for x, _ in pairs)
    assert report.count_second_o1 == sum(y is Outcome.O1 for _, y in pairs)


def test_sample_correlated_pair_is_reproducible() -> None:
    a, b = coplanar(0.0), coplanar(1.0)
    first = [sample_correlated_pair(a, b, make_generator(4)) for _ in range(3)]

    assert first[0] == first[1] == first[2]
    assert all(isinstance(x, Outcome) for x in first[0])


def test_chsh_reaches_the_quantum_bound() -> None:
    a, a2, b, b2 = (coplanar(t) for t in (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4))
    s = chsh_value(a, a2, b, b2, 10 ** 6, seed=7)

    assert abs(s - TSIRELSON) <= 0.01
    assert s <= TSIRELSON + 0.02


def test_chsh_terms_use_independent_streams() -> None:
    a = coplanar(0.0)
    terms = chsh_terms(a, a, a, a, 1000, seed=7)

    assert len({t.seed for t in terms}) == 4
    assert all(t.E == -1.0 for t in terms)


def test_chsh_degenerate_settings() -> None:
    a, b = coplanar(0.0), coplanar(math.pi / 2)

    assert chsh_value(a, a, a, a, 10_000, seed=2) == 2.0
    assert chsh_value(a, a, b, b, 10 ** 5, seed=2) <= 2.0


def test_rod_model_starts_in_the_centre() -> None:
    with pytest.raises(DomainError):
        RodModel(first=BallPoint(Vec3(0.0, 0.0, 0.5)))


@pytest.mark.parametrize("kwargs", [{"n": 0}, {"first_side": 3}])
def test_estimate_correlation_arguments(kwargs) -> None:
    args = {"n": 10, "first_side": 1, **kwargs}
    with pytest.raises(DomainError):
        estimate_correlation(coplanar(0.0), coplanar(1.0), args["n"], seed=0,
                             first_side=args["first_side"])
