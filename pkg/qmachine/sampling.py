"""
Deterministic sharded sampling.

Trials are cut into shards of SHARD_SIZE draws. Shard ``i`` of a run with
master seed ``s`` always draws from ``Philox(SeedSequence([s, i]))``, so a
run's counts depend on (seed, n) only and never on how many workers
process the shards.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from .constants import DEFAULT_WORKERS, MAX_SEED, RNG_NAME, SHARD_SIZE
from .exceptions import DomainError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def validate_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) \
            or not 0 <= int(seed) <= MAX_SEED:
        raise DomainError("Seed must be an unsigned 64-bit integer", argument="seed",
                          value=seed, expected=f"[0, {MAX_SEED}]")
    return int(seed)


def make_generator(seed: int, shard_index: Optional[int] = None) -> np.random.Generator:
    """Counter-based generator for a seed, or for one shard of that seed."""
    seed = validate_seed(seed)
    entropy = [seed] if shard_index is None else [seed, int(shard_index)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, *path: int) -> int:
    """64-bit child seed for an independent stream below ``seed``."""
    seed = validate_seed(seed)
    state = np.random.SeedSequence([seed, *path]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def shard_sizes(n: int) -> List[int]:
    if n < 1:
        raise DomainError("Number of trials must be positive", argument="n", value=n,
                          expected="n >= 1")
    full, rest = divmod(n, SHARD_SIZE)
    return [SHARD_SIZE] * full + ([rest] if rest else [])


def run_sharded(
    n: int,
    seed: int,
    shard_fn: Callable[[np.random.Generator, int], T],
    workers: Optional[int] = None
) -> List[T]:
    """Apply ``shard_fn(generator, size)`` to every shard, results in shard order."""
    seed = validate_seed(seed)
    sizes = shard_sizes(n)
    workers = max(1, min(workers or DEFAULT_WORKERS, len(sizes)))
    logger.debug(f"Sampling {n} trials in {len(sizes)} shards on {workers} workers "
                 f"(rng={RNG_NAME}, seed={seed})")

    def run_shard(item):
        index, size = item
        return shard_fn(make_generator(seed, index), size)

    if workers == 1:
        return [run_shard(item) for item in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run_shard, enumerate(sizes)))
