import logging
import zlib
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from .registry import HYPERBALL_THREADS

logger = logging.getLogger(__name__)


class Helper:
    default_threads = None

    @staticmethod
    def pairwise_sum(values: Iterable):
        """
        Tree reduction in fixed order. Result depends only on the order of ``values``.
        """
        values = list(values)
        if len(values) == 0:
            return 0.0
        while len(values) > 1:
            reduced = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
            if len(values) % 2 == 1:
                reduced.append(values[-1])
            values = reduced
        return values[0]

    @classmethod
    def thread_count(cls, threads=None):
        if threads is None:
            threads = cls.default_threads
        if threads is None:
            return HYPERBALL_THREADS
        return max(1, int(threads))

    @classmethod
    @contextmanager
    def threads_default(cls, threads=None):
        """
        Worker cap for calls that pass no ``threads`` of their own, restored on exit.
        """
        previous = cls.default_threads
        cls.default_threads = threads
        try:
            yield
        finally:
            cls.default_threads = previous

    @classmethod
    def tiled_map(cls, func, tiles: Iterable, threads=None):
        """
        Evaluates ``func`` on every tile. Results come back in tile order whatever the thread count.

        :param func: Callable of one tile.
        :param tiles: Iterable of tile descriptions.
        :param threads: Worker cap, defaults to ``threads_default`` and then HYPERBALL_THREADS.
        :return: List of results.
        """
        tiles = list(tiles)
        threads = min(cls.thread_count(threads), max(1, len(tiles)))
        if threads == 1:
            return [func(t) for t in tiles]
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(func, tiles))

    @classmethod
    def tiled_sum(cls, func, tiles: Iterable, threads=None):
        return cls.pairwise_sum(cls.tiled_map(func, tiles, threads))

    @staticmethod
    def rng_for(seed: int, key: str) -> np.random.Generator:
        return np.random.default_rng([int(seed), zlib.crc32(str(key).encode("utf-8"))])
