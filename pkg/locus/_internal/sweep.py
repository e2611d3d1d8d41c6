"""
Chunked exhaustive enumeration.

The message space F_q^k is walked in lexicographic order (first coordinate most
significant), split into contiguous chunks, and the chunks are run by a
:class:`ChunkLauncher`. Results are always returned in chunk order so that min/all
reductions are deterministic regardless of the number of workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

log = logging.getLogger(__name__)

T = TypeVar("T")


def split_to_chunks(total: int, n: Optional[int]) -> Iterable[range]:
    if n is None or n == -1:
        n = max(total, 1)
    assert n > 0
    for i in range(0, total, n):
        yield range(i, min(i + n, total))


def messages(q: int, k: int, start: int, stop: int) -> np.ndarray:
    """Rows are the base-q digit vectors of start..stop-1."""
    v = np.arange(start, stop, dtype=np.int64)
    place = np.array([q**e for e in range(k - 1, -1, -1)], dtype=np.int64)
    return (v[:, None] // place[None, :]) % q


class ChunkLauncher:
    def __init__(self, workers: int = 1) -> None:
        self.workers = max(int(workers), 1)

    def launch(
        self,
        fn: Callable[[int, range], T],
        chunks: Sequence[range],
        stop_when: Optional[Callable[[T], bool]] = None,
    ) -> List[T]:
        """
        :param fn: called with (chunk index, chunk)
        :param stop_when: sequential mode stops after the first result satisfying it
        """
        if self.workers == 1:
            log.debug(f"Launching {len(chunks)} chunks locally")
            runs: List[T] = []
            for idx, chunk in enumerate(chunks):
                log.debug(f"\t#{idx} : [{chunk.start}, {chunk.stop})")
                ret = fn(idx, chunk)
                runs.append(ret)
                if stop_when is not None and stop_when(ret):
                    log.debug(f"Stopping after chunk #{idx}")
                    break
            return runs
        log.debug(f"Launching {len(chunks)} chunks on {self.workers} threads")
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            futures = [executor.submit(fn, idx, chunk) for idx, chunk in enumerate(chunks)]
            return [f.result() for f in futures]
