"""
Real 3-vector algebra and spherical coordinates.

Everything on the machine side of the package (ball points, elastic
directions, projections onto an elastic) is expressed with these types.
"""
import logging
import math
from dataclasses import dataclass

from .constants import UNIT_TOLERANCE
from .exceptions import DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def _clamp(value: float, low: float = -1.0, high: float = 1.0) -> float:
    return max(low, min(high, value))


def wrap_azimuth(phi: float) -> float:
    """Reduce an azimuth into [0, 2pi)."""
    phi = phi % TWO_PI
    return 0.0 if phi >= TWO_PI else phi


@dataclass(frozen=True)
class Vec3:
    """A point of R^3."""
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise DomainError("Vector components must be finite",
                              argument="v", value=(self.x, self.y, self.z))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, r: float) -> "Vec3":
        return Vec3(r * self.x, r * self.y, r * self.z)

    __rmul__ = __mul__

    def dot(self, other: "Vec3") -> float:
        """Inproduct <v, w>."""
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def as_tuple(self):
        return (self.x, self.y, self.z)


ORIGIN = Vec3(0.0, 0.0, 0.0)
Z_AXIS = Vec3(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Direction:
    """A point of the unit sphere, used to label elastics and spin measurements."""
    v: Vec3

    def __post_init__(self) -> None:
        if abs(self.v.norm() - 1.0) > UNIT_TOLERANCE:
            raise DomainError("Direction must have unit norm", argument="v",
                              value=self.v.norm(), expected="|v| = 1")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Direction":
        return cls(spherical_to_cartesian(Spherical(1.0, theta, wrap_azimuth(phi))))

    @classmethod
    def from_vector(cls, v: Vec3) -> "Direction":
        scale = max(abs(v.x), abs(v.y), abs(v.z))
        if scale == 0.0:
            raise DomainError("Cannot normalize the zero vector", argument="v",
                              value=v.as_tuple())
        # rescale first so tiny vectors do not underflow in the norm
        v = Vec3(v.x / scale, v.y / scale, v.z / scale)
        return cls(v * (1.0 / v.norm()))

    def __neg__(self) -> "Direction":
        return Direction(-self.v)

    def dot(self, other: Vec3) -> float:
        return self.v.dot(other)


@dataclass(frozen=True)
class Spherical:
    """Spherical coordinates (rho, theta, phi) with theta in [0, pi], phi in [0, 2pi)."""
    rho: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if self.rho < 0.0:
            raise DomainError("rho must be non-negative", argument="rho", value=self.rho)
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError("theta out of range", argument="theta",
                              value=self.theta, expected="[0, pi]")
        if not 0.0 <= self.phi < TWO_PI:
            raise DomainError("phi out of range", argument="phi",
                              value=self.phi, expected="[0, 2pi)")


def spherical_to_cartesian(s: Spherical) -> Vec3:
    sin_theta = math.sin(s.theta)
    return Vec3(s.rho * sin_theta * math.cos(s.phi),
                s.rho * sin_theta * math.sin(s.phi),
                s.rho * math.cos(s.theta))


def cartesian_to_spherical(v: Vec3) -> Spherical:
    """Inverse of spherical_to_cartesian; poles and the origin get phi = 0."""
    rho = v.norm()
    if rho == 0.0:
        return Spherical(0.0, 0.0, 0.0)
    theta = math.atan2(math.hypot(v.x, v.y), v.z)
    if v.x == 0.0 and v.y == 0.0:
        return Spherical(rho, theta, 0.0)
    return Spherical(rho, theta, wrap_azimuth(math.atan2(v.y, v.x)))


def angle_between(u: Vec3, v: Vec3) -> float:
    """Angle gamma in [0, pi] between two non-zero vectors."""
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 or nv == 0.0:
        raise DomainError("Angle with the zero vector is undefined",
                          argument="u" if nu == 0.0 else "v", value=0.0)
    # dot products of unit vectors can overshoot 1 by a few ulps
    return math.acos(_clamp(u.dot(v) / (nu * nv)))
