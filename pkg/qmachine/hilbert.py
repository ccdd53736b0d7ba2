"""
The standard C^2 description of a spin-1/2 entity.

States are unit spinors (rays, so equality is up to a global phase), a
spin measurement along ``u`` is the projector pair ``{P_u, I - P_u}`` and
probabilities follow the Born rule. Interior points of the machine's
ball are represented by density operators and probabilities by the trace
rule ``tr(W P)``. Compound entities live in C^2 (x) C^2.

Phase convention: ``c(theta, phi) = (cos(theta/2) e^{-i phi/2},
sin(theta/2) e^{+i phi/2})``. With it ``|c_v><c_v| = P_v = (I + v.sigma)/2``,
so the projector, the pure-state density and the Bloch vector all agree.
"""
import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from .constants import POSITIVITY_TOLERANCE, PROJECTION_TOLERANCE, UNIT_TOLERANCE
from .exceptions import CollapseUndefinedError, DomainError
from .geometry import Direction, Vec3, Z_AXIS, cartesian_to_spherical
from .machine import BallPoint

logger = logging.getLogger(__name__)

IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

FIRST = "first"
SECOND = "second"


def _frozen_array(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Entries must be finite", argument="values", value=arr.tolist())
    arr.setflags(write=False)
    return arr


def _max_entry(m: np.ndarray) -> float:
    return float(np.max(np.abs(m)))


@dataclass(frozen=True, eq=False)
class Spinor2:
    """Unit vector of C^2."""
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.amplitudes, (2,))
        norm = float(np.vdot(arr, arr).real)
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise DomainError("Spinor must have unit norm", argument="amplitudes",
                              value=norm, expected="|a0|^2 + |a1|^2 = 1")
        object.__setattr__(self, "amplitudes", arr)

    @property
    def a0(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def a1(self) -> complex:
        return complex(self.amplitudes[1])

    def inner(self, other: "Spinor2") -> complex:
        """<self, other>, antilinear in the first slot."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class Operator2:
    """2x2 complex matrix."""
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen_array(self.matrix, (2, 2)))

    def __matmul__(self, other: "Operator2") -> "Operator2":
        return Operator2(self.matrix @ other.matrix)

    def complement(self) -> "Operator2":
        """I - P."""
        return Operator2(IDENTITY2 - self.matrix)


@dataclass(frozen=True, eq=False)
class Density2:
    """Density operator on C^2: self-adjoint, trace one, positive."""
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _frozen_array(self.matrix, (2, 2))
        object.__setattr__(self, "matrix", m)
        if _max_entry(m - m.conj().T) > UNIT_TOLERANCE:
            raise DomainError("Density operator must be self-adjoint", argument="matrix",
                              value=_max_entry(m - m.conj().T))
        if abs(np.trace(m) - 1.0) > UNIT_TOLERANCE:
            raise DomainError("Density operator must have unit trace", argument="matrix",
                              value=complex(np.trace(m)))
        low, _ = self.eigenvalues()
        if low < -UNIT_TOLERANCE:
            raise DomainError("Density operator must be positive", argument="matrix",
                              value=low, expected="eigenvalues >= 0")

    def eigenvalues(self):
        """Closed form (a + d)/2 -+ hypot((a - d)/2, |b|), ascending."""
        m = self.matrix
        half_trace = float((m[0, 0] + m[1, 1]).real) / 2.0
        disc = math.hypot(float((m[0, 0] - m[1, 1]).real) / 2.0, abs(m[0, 1]))
        return half_trace - disc, half_trace + disc

    def rank(self, tol: float = UNIT_TOLERANCE) -> int:
        return sum(1 for value in self.eigenvalues() if value > tol)


@dataclass(frozen=True, eq=False)
class Spinor4:
    """Unit vector of C^2 (x) C^2 in the product basis |00>, |01>, |10>, |11>."""
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.amplitudes, (4,))
        norm = float(np.vdot(arr, arr).real)
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise DomainError("Spinor must have unit norm", argument="amplitudes",
                              value=norm, expected="sum |a_i|^2 = 1")
        object.__setattr__(self, "amplitudes", arr)


@dataclass(frozen=True, eq=False)
class Operator4:
    """4x4 complex matrix on C^2 (x) C^2."""
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen_array(self.matrix, (4, 4)))


def same_ray(a: Spinor2, b: Spinor2, tol: float = UNIT_TOLERANCE) -> bool:
    """True if a and b differ by a global phase only."""
    return abs(abs(a.inner(b)) - 1.0) <= tol


def spin_state(theta: float, phi: float) -> Spinor2:
    """Spin state c(theta, phi) pointing along the direction with those angles."""
    if not 0.0 <= theta <= math.pi:
        raise DomainError("theta out of range", argument="theta", value=theta,
                          expected="[0, pi]")
    return Spinor2([math.cos(theta / 2.0) * cmath.exp(-0.5j * phi),
                    math.sin(theta / 2.0) * cmath.exp(0.5j * phi)])


def spin_state_for(v: Direction) -> Spinor2:
    s = cartesian_to_spherical(v.v)
    return spin_state(s.theta, s.phi)


def projector_for_direction(alpha: float, beta: float) -> Operator2:
    """P_u for u = (1, alpha, beta); outcome O1 of the spin measurement along u."""
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)
    return Operator2(0.5 * np.array([
        [1.0 + cos_a, cmath.exp(-1j * beta) * sin_a],
        [cmath.exp(1j * beta) * sin_a, 1.0 - cos_a]
    ]))


def projector_for(u: Direction) -> Operator2:
    s = cartesian_to_spherical(u.v)
    return projector_for_direction(s.theta, s.phi)


def is_projection(p: Operator2, tol: float = PROJECTION_TOLERANCE) -> bool:
    m = p.matrix
    return _max_entry(m @ m - m) <= tol and _max_entry(m - m.conj().T) <= tol


def _require_projection(p: Operator2, argument: str = "P") -> None:
    if not is_projection(p):
        m = p.matrix
        raise DomainError("Operator is not an orthogonal projection", argument=argument,
                          value=max(_max_entry(m @ m - m), _max_entry(m - m.conj().T)),
                          expected=f"max-entry error <= {PROJECTION_TOLERANCE}")


def born_probability(c: Spinor2, p: Operator2) -> float:
    """<c, P c>."""
    _require_projection(p)
    value = float(np.vdot(c.amplitudes, p.matrix @ c.amplitudes).real)
    return min(1.0, max(0.0, value))


def collapse(c: Spinor2, p: Operator2) -> Spinor2:
    """State after outcome P: P c / |P c|."""
    probability = born_probability(c, p)
    if probability <= UNIT_TOLERANCE:
        raise CollapseUndefinedError("Cannot collapse onto a branch of zero probability",
                                     probability=probability)
    projected = p.matrix @ c.amplitudes
    return Spinor2(projected / np.linalg.norm(projected))


def density_of(c: Spinor2) -> Density2:
    """Rank-one density |c><c|."""
    return Density2(np.outer(c.amplitudes, c.amplitudes.conj()))


def density_from_decomposition(lambda1: float, v: Direction) -> Density2:
    """lambda1 W(v) + (1 - lambda1) W(-v): the ball point (2 lambda1 - 1) v."""
    if not 0.0 <= lambda1 <= 1.0:
        raise DomainError("Convex weight out of range", argument="lambda1",
                          value=lambda1, expected="[0, 1]")
    w_plus = density_of(spin_state_for(v)).matrix
    w_minus = density_of(spin_state_for(-v)).matrix
    return Density2(lambda1 * w_plus + (1.0 - lambda1) * w_minus)


def density_from_ball_point(w: BallPoint) -> Density2:
    """Density operator reproducing the machine's transition probabilities for state w."""
    r = w.w.norm()
    if r == 0.0:
        # any antipodal pair works at the centre
        return density_from_decomposition(0.5, Direction(Z_AXIS))
    return density_from_decomposition((1.0 + min(r, 1.0)) / 2.0, Direction.from_vector(w.w))


def ball_point_from_density(density: Density2) -> BallPoint:
    """Bloch vector (tr W sigma_x, tr W sigma_y, tr W sigma_z)."""
    x, y, z = (float(np.trace(density.matrix @ sigma).real) for sigma in PAULI)
    return BallPoint(Vec3(x, y, z))


def trace_probability(density: Density2, p: Operator2) -> float:
    """tr(W P)."""
    _require_projection(p)
    return float(np.trace(density.matrix @ p.matrix).real)


def tensor_state(c1: Spinor2, c2: Spinor2) -> Spinor4:
    return Spinor4(np.kron(c1.amplitudes, c2.amplitudes))


def tensor_op(a: Operator2, b: Operator2) -> Operator4:
    return Operator4(np.kron(a.matrix, b.matrix))


def singlet_state() -> Spinor4:
    """(|01> - |10>) / sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return Spinor4([0.0, r, -r, 0.0])


def density_of_pair(c: Spinor4) -> Operator4:
    return Operator4(np.outer(c.amplitudes, c.amplitudes.conj()))


def joint_probability(c: Spinor4, pa: Operator2, pb: Operator2) -> float:
    """<c, (Pa (x) Pb) c>."""
    _require_projection(pa, "Pa")
    _require_projection(pb, "Pb")
    joint = tensor_op(pa, pb).matrix
    return float(np.vdot(c.amplitudes, joint @ c.amplitudes).real)


def correlation(c: Spinor4, a: Direction, b: Direction) -> float:
    """E(a, b) = sum over outcomes of sign_a * sign_b * joint probability."""
    total = 0.0
    for sign_a, pa in ((1, projector_for(a)), (-1, projector_for(-a))):
        for sign_b, pb in ((1, projector_for(b)), (-1, projector_for(-b))):
            total += sign_a * sign_b * joint_probability(c, pa, pb)
    return total


def singlet_correlation(a: Direction, b: Direction) -> float:
    return correlation(singlet_state(), a, b)


def amplitude_rank(c: Spinor4, tol: float = UNIT_TOLERANCE) -> int:
    """Rank of the 2x2 amplitude matrix; 1 exactly for product states."""
    singular = np.linalg.svd(c.amplitudes.reshape(2, 2), compute_uv=False)
    return int(np.count_nonzero(singular > tol))


def is_product_state(c: Spinor4) -> bool:
    return amplitude_rank(c) == 1


def _require_density4(rho: Operator4) -> None:
    m = rho.matrix
    if _max_entry(m - m.conj().T) > POSITIVITY_TOLERANCE:
        raise DomainError("Operator is not self-adjoint", argument="rho4",
                          value=_max_entry(m - m.conj().T))
    if abs(np.trace(m) - 1.0) > POSITIVITY_TOLERANCE:
        raise DomainError("Operator does not have unit trace", argument="rho4",
                          value=complex(np.trace(m)))
    try:
        np.linalg.cholesky(m + POSITIVITY_TOLERANCE * IDENTITY4)
    except np.linalg.LinAlgError:
        raise DomainError("Operator is not positive", argument="rho4",
                          expected="positive semi-definite")


def partial_trace(rho4: Operator4, which: str) -> Density2:
    """Reduced density of the ``first`` or ``second`` factor."""
    if which not in (FIRST, SECOND):
        raise DomainError("Unknown subsystem", argument="which", value=which,
                          expected=f"{FIRST!r} or {SECOND!r}")
    _require_density4(rho4)
    blocks = rho4.matrix.reshape(2, 2, 2, 2)
    if which == FIRST:
        reduced = np.einsum("ikjk->ij", blocks)
    else:
        reduced = np.einsum("kikj->ij", blocks)
    # the input is only checked to POSITIVITY_TOLERANCE: renormalise onto a density
    reduced = (reduced + reduced.conj().T) / 2.0
    reduced = reduced / float(np.trace(reduced).real)
    values, vectors = np.linalg.eigh(reduced)
    if values[0] < 0.0:
        values = np.clip(values, 0.0, None)
        reduced = (vectors * (values / values.sum())) @ vectors.conj().T
    return Density2(reduced)
