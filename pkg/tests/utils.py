import numpy as np

from qmachine.geometry import Direction, Vec3
from qmachine.lattice import mo_lattice, mo_ortho
from qmachine.spa import sps_from_lattice


def axis(x: float, y: float, z: float) -> Direction:
    return Direction(Vec3(x, y, z))


def mo_system(n: int):
    lattice = mo_lattice(n)
    return sps_from_lattice(lattice, mo_ortho(lattice) if n % 2 == 0 else None)


def random_direction(rng: np.random.Generator) -> Direction:
    return Direction.from_vector(Vec3(*(float(c) for c in rng.normal(size=3))))
