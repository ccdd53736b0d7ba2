"""
Constants used throughout the qmachine package.
"""
from typing import Final
import multiprocessing

# Tolerances
UNIT_TOLERANCE: Final = 1e-12
PROJECTION_TOLERANCE: Final = 1e-10  # max-entry norm of P^2 - P and P - P^dagger
POSITIVITY_TOLERANCE: Final = 1e-10  # diagonal shift for the 4x4 Cholesky test
CONTINUITY_TOLERANCE: Final = 1e-9

# Sampling
SHARD_SIZE: Final = 2 ** 16
DEFAULT_SEED: Final = 0
DEFAULT_TRIALS: Final = 10 ** 6
MAX_SEED: Final = 2 ** 64 - 1
DEFAULT_WORKERS: Final = multiprocessing.cpu_count()
RNG_NAME: Final = "numpy.random.Philox(SeedSequence([seed, shard]))"

# Lattice engine caps
SUBSET_ENUMERATION_CAP: Final = 16
TRIPLE_INTERSECTION_DEPTH: Final = 3
ORTHO_SEARCH_CAP: Final = 64
EXACT_CHAIN_CAP: Final = 20

# Command line
DEFAULT_PROBE_GRID: Final = 181
DEFAULT_BELL_GRID: Final = 10
DEFAULT_EPSILON_GRID: Final = 21
PROBE_AZIMUTH: Final = 0.7  # azimuth of the probed states, keeps the phases non-trivial
CSV_FLOAT_FORMAT: Final = ".17g"
DEFAULT_EPSILONS: Final = (1.0, 0.5, 0.1, 1e-6)
LOG_FORMAT: Final = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Monte Carlo acceptance bands, as multiples of 1/sqrt(n)
FREQUENCY_TOLERANCE_FACTOR: Final = 2.0
CORRELATION_TOLERANCE_FACTOR: Final = 5.0
CHSH_TOLERANCE_FACTOR: Final = 10.0

EXIT_OK: Final = 0
EXIT_INVARIANT: Final = 1
EXIT_INPUT: Final = 2
