"""
Keyed, counter-indexed unit-uniform streams.

A stream is identified by `(seed, interval, channel, stream class)`. Its i-th value is a pure
function of the key and `i`, so a fine propagation over interval `n` replays exactly the same
per-channel Poisson arrivals no matter which start state or parareal iteration it serves.

Values are produced by numpy's Philox counter-based generator in blocks of `BLOCK_SIZE` raw
64-bit words; the Philox key is derived from the stream key with a `SeedSequence`.
"""

import enum
import math
import numpy as np

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple


BLOCK_SIZE = 256

_SEED_MASK = (1 << 64) - 1


class StreamClass(enum.IntEnum):
    NRM_GAP = 0
    THINNING_GAP = 1
    THINNING_MARK = 2


@dataclass(frozen=True)
class NoiseKey:
    seed: int
    interval_index: int
    channel_index: int
    stream_class: StreamClass = StreamClass.NRM_GAP


@lru_cache(maxsize=65536)
def _philox_key(key: NoiseKey) -> Tuple[int, int]:
    sequence = np.random.SeedSequence(
        entropy=int(key.seed) & _SEED_MASK,
        spawn_key=(int(key.interval_index), int(key.channel_index), int(key.stream_class)),
    )
    words = sequence.generate_state(2, dtype=np.uint64)
    return int(words[0]), int(words[1])


def _uniform_block(key: NoiseKey, block: int) -> np.ndarray:
    """
    Return the uniforms with counters `[block * BLOCK_SIZE, (block + 1) * BLOCK_SIZE)`.
    """
    high, low = _philox_key(key)
    # Philox emits four words per counter step.
    generator = np.random.Philox(counter=block * (BLOCK_SIZE // 4), key=(high << 64) | low)
    raw = generator.random_raw(BLOCK_SIZE)

    # 53 significant bits shifted by half an ulp: strictly inside (0, 1).
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * (2.0 ** -53)


def uniform_at(key: NoiseKey, counter: int) -> float:
    """
    Return the `counter`-th uniform of the stream `key`, a value in the open interval (0, 1).
    """
    block, offset = divmod(int(counter), BLOCK_SIZE)
    return float(_uniform_block(key, block)[offset])


class NoiseSource:
    """
    Sequential reader of one stream. Single owner; cheap to create.
    """

    def __init__(self, key: NoiseKey, counter: int = 0):
        self.key = key
        self.counter = counter
        self._block = -1
        self._values = []

    def uniform(self) -> float:
        block, offset = divmod(self.counter, BLOCK_SIZE)
        if block != self._block:
            self._values = _uniform_block(self.key, block).tolist()
            self._block = block

        self.counter += 1
        return self._values[offset]

    def exponential_gap(self) -> float:
        """
        Next inter-arrival gap of the unit-rate Poisson process, `-ln U`.
        """
        return -math.log(self.uniform())


@dataclass(frozen=True)
class IntervalNoise:
    """
    The family of streams driving one interval of a run.
    """
    seed: int
    interval: int

    def key(self, channel: int, stream_class: StreamClass = StreamClass.NRM_GAP) -> NoiseKey:
        return NoiseKey(self.seed, self.interval, channel, stream_class)

    def sources(self, channels: int, stream_class: StreamClass = StreamClass.NRM_GAP) -> Tuple[NoiseSource, ...]:
        """
        One fresh source per channel.
        """
        return tuple(NoiseSource(self.key(r, stream_class)) for r in range(channels))
