"""Block-sharded Monte Carlo driver.

Trials are cut into fixed-size blocks. Each block gets its own counter-based
generator keyed by ``(seed, stream, block)``, so the random numbers a trial
sees never depend on how many workers run the blocks. Per-block results are
returned in block order and reduced by the caller in that order, which keeps
floating point sums bit-identical across worker counts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

from parsphere.errors import DomainError

BLOCK_SIZE = 8192

T = TypeVar("T")


def block_generator(seed: int, stream: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(block)))
    return np.random.Generator(np.random.Philox(ss))


def run_blocks(
    n: int,
    seed: int,
    fn: Callable[[np.random.Generator, int], T],
    *,
    stream: int = 0,
    workers: int = 1,
) -> list[T]:
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    if seed < 0 or seed >= 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    sizes = [min(BLOCK_SIZE, n - start) for start in range(0, n, BLOCK_SIZE)]

    def task(k: int) -> T:
        return fn(block_generator(seed, stream, k), sizes[k])

    if workers <= 1 or len(sizes) == 1:
        return [task(k) for k in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(len(sizes))))


def draw_orientations(rng: np.random.Generator, size: int, p_plus: float = 0.5) -> np.ndarray:
    """Sample ``size`` hidden-variable signs with P(+1) = p_plus."""
    return np.where(rng.random(size) < p_plus, 1, -1).astype(np.int8)
