"""Seeded random sampling with a thread-count independent reduction order.

All randomness comes from numpy's PCG64 generator (``numpy.random.default_rng``).
A sample range is cut into fixed-size chunks; chunk ``i`` draws from the i-th
child of ``SeedSequence(seed)``, and chunk results are summed in chunk order.
The result therefore depends on (seed, samples, chunk_size) only, never on the
number of worker threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List

import numpy as np

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1000

ChunkFn = Callable[[np.random.Generator, int], np.ndarray]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def derive_seeds(seed: int, chunks: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(chunks)


def chunk_counts(samples: int, chunk_size: int = CHUNK_SIZE) -> List[int]:
    full, rest = divmod(samples, chunk_size)
    counts = [chunk_size] * full
    if rest:
        counts.append(rest)
    return counts


def chunked_map(fn: Callable[[np.random.Generator, int], Any], samples: int, seed: int,
                threads: int = 1, chunk_size: int = CHUNK_SIZE) -> List[Any]:
    """Run fn(rng_i, count_i) for every chunk; results come back in chunk order."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    counts = chunk_counts(samples, chunk_size)
    seeds = derive_seeds(seed, len(counts))

    def run(i: int) -> Any:
        return fn(np.random.default_rng(seeds[i]), counts[i])

    if threads > 1 and len(counts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(counts))))
    else:
        parts = [run(i) for i in range(len(counts))]

    logger.debug("Ran %d chunks (%d samples, %d threads)", len(parts), samples, threads)
    return parts


def chunked_sum(fn: ChunkFn, samples: int, seed: int, threads: int = 1,
                chunk_size: int = CHUNK_SIZE) -> np.ndarray:
    """Sum fn(rng_i, count_i) over all chunks, in chunk order."""
    parts = chunked_map(fn, samples, seed, threads, chunk_size)
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def chunked_mean(fn: ChunkFn, samples: int, seed: int, threads: int = 1,
                 chunk_size: int = CHUNK_SIZE) -> np.ndarray:
    return chunked_sum(fn, samples, seed, threads, chunk_size) / samples


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Rows are unit vectors drawn uniformly from the complex sphere."""
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def simplex_weights(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform point on the probability simplex."""
    w = rng.exponential(size=count)
    return w / w.sum()
