import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmachine.exceptions import CollapseUndefinedError, DomainError
from qmachine.geometry import Direction, Vec3
from qmachine.hilbert import (FIRST, IDENTITY2, IDENTITY4, SECOND, Density2, Operator2,
                              Operator4, Spinor2, Spinor4, amplitude_rank,
                              ball_point_from_density, born_probability, collapse,
                              correlation, density_from_ball_point, density_from_decomposition,
                              density_of, density_of_pair, is_product_state, is_projection,
                              joint_probability, partial_trace, projector_for,
                              projector_for_direction, same_ray, singlet_correlation,
                              singlet_state, spin_state, spin_state_for, tensor_op,
                              tensor_state, trace_probability)
from qmachine.machine import BallPoint, transition_probability
from . import strategies
from .utils import random_direction

Z_UP = projector_for_direction(0.0, 0.0)


def test_spin_state_poles() -> None:
    assert np.allclose(spin_state(0.0, 0.0).amplitudes, [1.0, 0.0], atol=1e-12)
    assert np.allclose(spin_state(math.pi, 0.0).amplitudes, [0.0, 1.0], atol=1e-12)


@given(strategies.thetas, strategies.phis)
def test_opposite_directions_are_orthogonal(theta: float, phi: float) -> None:
    c = spin_state(theta, phi)
    opposite = spin_state(math.pi - theta, phi + math.pi)

    assert abs(c.inner(opposite)) <= 1e-12


@given(strategies.thetas, strategies.phis)
def test_pure_density_is_the_projector(theta: float, phi: float) -> None:
    w = density_of(spin_state(theta, phi)).matrix
    p = projector_for_direction(theta, phi).matrix

    assert np.allclose(w, p, atol=1e-12, rtol=0.0)


def test_spin_state_range() -> None:
    with pytest.raises(DomainError):
        spin_state(-0.1, 0.0)


def test_projector_examples() -> None:
    assert np.allclose(Z_UP.matrix, [[1.0, 0.0], [0.0, 0.0]], atol=1e-12)
    assert np.allclose(projector_for_direction(math.pi, 0.0).matrix, [[0.0, 0.0], [0.0, 1.0]],
                       atol=1e-12)


@given(strategies.directions)
def test_projector_invariants(u: Direction) -> None:
    p = projector_for(u).matrix

    assert np.allclose(p @ p, p, atol=1e-12, rtol=0.0)
    assert np.allclose(p, p.conj().T, atol=1e-12, rtol=0.0)
    assert np.trace(p).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(IDENTITY2 - p, projector_for(-u).matrix, atol=1e-12, rtol=0.0)


def test_is_projection() -> None:
    assert is_projection(Z_UP)
    assert not is_projection(Operator2([[1.0, 1.0], [0.0, 0.0]]))
    assert not is_projection(Operator2(2.0 * IDENTITY2))


@given(strategies.directions)
def test_born_probability_of_own_direction(u: Direction) -> None:
    assert born_probability(spin_state_for(u), projector_for(u)) == pytest.approx(1.0, abs=1e-12)


@given(strategies.thetas, strategies.phis)
def test_born_probability_along_z(theta: float, phi: float) -> None:
    c = spin_state(theta, phi)

    assert born_probability(c, Z_UP) == pytest.approx(math.cos(theta / 2) ** 2, abs=1e-12)
    assert born_probability(c, Z_UP) + born_probability(c, Z_UP.complement()) == \
        pytest.approx(1.0, abs=1e-12)


@given(strategies.directions, strategies.directions)
def test_born_probability_is_the_half_angle_law(u: Direction, v: Direction) -> None:
    expected = (1.0 + u.v.dot(v.v)) / 2.0

    assert born_probability(spin_state_for(v), projector_for(u)) == pytest.approx(expected,
                                                                                  abs=1e-12)


def test_born_probability_rejects_non_projections() -> None:
    with pytest.raises(DomainError):
        born_probability(spin_state(0.3, 0.1), Operator2([[1.0, 1.0], [0.0, 0.0]]))


@given(st.floats(min_value=0.0, max_value=math.pi - 0.01), strategies.phis)
def test_collapse_onto_z(theta: float, phi: float) -> None:
    after = collapse(spin_state(theta, phi), Z_UP)

    assert same_ray(after, Spinor2([1.0, 0.0]))
    assert born_probability(after, Z_UP) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(Z_UP.matrix @ after.amplitudes, after.amplitudes, atol=1e-12)


def test_collapse_of_eigenvector() -> None:
    c = spin_state(1.1, 2.3)

    assert same_ray(collapse(c, projector_for_direction(1.1, 2.3)), c)


def test_collapse_on_zero_branch() -> None:
    with pytest.raises(CollapseUndefinedError):
        collapse(spin_state(math.pi, 0.0), Z_UP)


def test_density_examples() -> None:
    z = Direction(Vec3(0.0, 0.0, 1.0))

    assert np.allclose(density_from_ball_point(BallPoint.center()).matrix, IDENTITY2 / 2,
                       atol=1e-12)
    assert np.allclose(density_from_ball_point(BallPoint(Vec3(0.0, 0.0, 0.5))).matrix,
                       np.diag([0.75, 0.25]), atol=1e-12)
    assert density_from_ball_point(BallPoint.surface(z)).rank() == 1


@given(strategies.ball_points)
def test_density_from_ball_point_is_a_density(w: BallPoint) -> None:
    density = density_from_ball_point(w)
    m = density.matrix
    low, high = density.eigenvalues()

    assert np.allclose(m, m.conj().T, atol=1e-12, rtol=0.0)
    assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
    assert low >= -1e-12
    assert high == pytest.approx((1.0 + w.w.norm()) / 2.0, abs=1e-12)


@given(strategies.ball_points)
def test_ball_point_round_trip(w: BallPoint) -> None:
    back = ball_point_from_density(density_from_ball_point(w))

    assert back.w.as_tuple() == pytest.approx(w.w.as_tuple(), abs=1e-12)


@given(strategies.directions)
def test_centre_is_decomposition_independent(v: Direction) -> None:
    assert np.allclose(density_from_decomposition(0.5, v).matrix, IDENTITY2 / 2, atol=1e-12)


def test_decomposition_weight_range() -> None:
    with pytest.raises(DomainError):
        density_from_decomposition(1.5, Direction(Vec3(1.0, 0.0, 0.0)))


def test_density_validation() -> None:
    with pytest.raises(DomainError):
        Density2([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(DomainError):
        Density2([[1.5, 0.0], [0.0, -0.5]])
    with pytest.raises(DomainError):
        Density2([[0.5, 0.1], [0.3, 0.5]])


def test_trace_probability_examples() -> None:
    assert trace_probability(Density2(IDENTITY2 / 2), projector_for_direction(0.7, 1.9)) == \
        pytest.approx(0.5, abs=1e-12)
    theta, lam = 0.9, 0.8
    w = BallPoint(Direction.from_angles(theta, 0.0).v * (2 * lam - 1))
    expected = lam * math.cos(theta / 2) ** 2 + (1 - lam) * math.sin(theta / 2) ** 2

    assert trace_probability(density_from_ball_point(w), Z_UP) == pytest.approx(expected,
                                                                               abs=1e-12)


def test_machine_and_hilbert_agree_on_random_grid() -> None:
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in range(1000):
        u = random_direction(rng)
        v = random_direction(rng)
        r = 1.0 if k < 500 else float(rng.uniform(0.0, 1.0))
        w = BallPoint(v.v * r)
        machine, _ = transition_probability(u, w)
        trace = trace_probability(density_from_ball_point(w), projector_for(u))
        worst = max(worst, abs(machine - trace))
        if r == 1.0:
            born = born_probability(spin_state_for(v), projector_for(u))
            worst = max(worst, abs(machine - born))

    assert worst <= 1e-12


def test_tensor_examples() -> None:
    up = Spinor2([1.0, 0.0])

    assert np.allclose(tensor_state(up, up).amplitudes, [1.0, 0.0, 0.0, 0.0])
    assert np.allclose(tensor_op(Operator2(IDENTITY2), Operator2(IDENTITY2)).matrix, IDENTITY4)


@given(strategies.directions, strategies.directions, strategies.directions, strategies.directions)
def test_product_expectations_factorize(a: Direction, b: Direction, p: Direction,
                                        q: Direction) -> None:
    ca, cb = spin_state_for(a), spin_state_for(b)
    pp, pq = projector_for(p), projector_for(q)
    joint = joint_probability(tensor_state(ca, cb), pp, pq)

    assert joint == pytest.approx(born_probability(ca, pp) * born_probability(cb, pq), abs=1e-12)


def test_singlet() -> None:
    c = singlet_state()

    assert np.vdot(c.amplitudes, c.amplitudes).real == pytest.approx(1.0, abs=1e-12)
    assert joint_probability(c, Z_UP, Z_UP) == pytest.approx(0.0, abs=1e-12)
    assert amplitude_rank(c) == 2
    assert not is_product_state(c)
    assert is_product_state(tensor_state(spin_state(0.4, 0.2), spin_state(2.0, 5.0)))


@given(strategies.directions, strategies.directions)
def test_joint_outcomes_sum_to_one(a: Direction, b: Direction) -> None:
    c = singlet_state()
    total = sum(joint_probability(c, pa, pb)
                for pa in (projector_for(a), projector_for(-a))
                for pb in (projector_for(b), projector_for(-b)))

    assert total == pytest.approx(1.0, abs=1e-12)


def test_singlet_correlation_grid() -> None:
    angles = np.linspace(0.0, math.pi, 20)
    for alpha in angles:
        for beta in angles:
            a = Direction.from_angles(float(alpha), 0.0)
            b = Direction.from_angles(float(beta), 1.3)
            assert singlet_correlation(a, b) == pytest.approx(-a.v.dot(b.v), abs=1e-12)


def test_product_state_correlation_is_product_of_means() -> None:
    a, b = Direction.from_angles(0.5, 0.0), Direction.from_angles(1.5, 0.5)
    c = tensor_state(spin_state(0.0, 0.0), spin_state(0.0, 0.0))

    assert correlation(c, a, b) == pytest.approx(a.v.z * b.v.z, abs=1e-12)


def test_partial_trace_of_product() -> None:
    c1, c2 = spin_state(0.8, 0.3), spin_state(2.2, 4.0)
    rho = density_of_pair(tensor_state(c1, c2))

    assert np.allclose(partial_trace(rho, FIRST).matrix, density_of(c1).matrix, atol=1e-12)
    assert np.allclose(partial_trace(rho, SECOND).matrix, density_of(c2).matrix, atol=1e-12)


def test_singlet_marginals_are_maximally_mixed() -> None:
    rho = density_of_pair(singlet_state())
    for which in (FIRST, SECOND):
        marginal = partial_trace(rho, which)
        assert np.allclose(marginal.matrix, IDENTITY2 / 2, atol=1e-12)
        assert marginal.eigenvalues() == pytest.approx((0.5, 0.5), abs=1e-12)
        assert marginal.rank() == 2


@given(st.floats(min_value=0.1, max_value=math.pi / 2 - 0.1))
def test_entangled_marginals_have_rank_two(t: float) -> None:
    c = Spinor4([math.cos(t), 0.0, 0.0, math.sin(t)])

    assert not is_product_state(c)
    assert partial_trace(density_of_pair(c), FIRST).rank() == 2


def test_partial_trace_validation() -> None:
    with pytest.raises(DomainError):
        partial_trace(density_of_pair(singlet_state()), "third")
    with pytest.raises(DomainError):
        partial_trace(Operator4(2.0 * IDENTITY4), FIRST)
    with pytest.raises(DomainError):
        partial_trace(Operator4(np.diag([1.5, -0.5, 0.0, 0.0])), FIRST)


@pytest.mark.parametrize("diagonal", [
    [0.5 + 5e-11, 0.0, 0.0, 0.5],
    [0.0, -5e-11, 0.0, 1.0 + 5e-11],
])
def test_partial_trace_within_the_input_tolerance(diagonal) -> None:
    rho = Operator4(np.diag(diagonal).astype(complex))

    for which in (FIRST, SECOND):
        marginal = partial_trace(rho, which)
        assert np.trace(marginal.matrix).real == pytest.approx(1.0, abs=1e-15)
        assert marginal.eigenvalues()[0] >= -1e-15
