from typing import List, Optional

import numpy as np
from pytest import mark, param

from locus._internal.sweep import ChunkLauncher, messages, split_to_chunks


@mark.parametrize(
    "total,n,expected",
    [
        param(10, 3, [range(0, 3), range(3, 6), range(6, 9), range(9, 10)], id="remainder"),
        param(6, 3, [range(0, 3), range(3, 6)], id="exact"),
        param(5, None, [range(0, 5)], id="single"),
        param(5, -1, [range(0, 5)], id="single_minus_one"),
        param(0, 4, [], id="empty"),
    ],
)
def test_split_to_chunks(total: int, n: Optional[int], expected: List[range]) -> None:
    assert list(split_to_chunks(total, n)) == expected


def test_messages_are_lexicographic() -> None:
    m = messages(3, 2, 0, 9)
    assert m.tolist() == [[a, b] for a in range(3) for b in range(3)]
    assert messages(5, 3, 26, 27).tolist() == [[1, 0, 1]]


def test_messages_cover_the_space() -> None:
    m = np.concatenate([messages(4, 3, r.start, r.stop) for r in split_to_chunks(64, 10)])
    assert len({tuple(row) for row in m.tolist()}) == 64


@mark.parametrize("workers", [param(1, id="sequential"), param(4, id="threads")])
def test_launcher_keeps_chunk_order(workers: int) -> None:
    chunks = list(split_to_chunks(100, 7))
    ret = ChunkLauncher(workers).launch(lambda idx, r: (idx, sum(r)), chunks)
    assert [idx for idx, _ in ret] == list(range(len(chunks)))
    assert sum(s for _, s in ret) == sum(range(100))


def test_launcher_stops_early() -> None:
    seen: List[int] = []

    def fn(idx: int, r: range) -> int:
        seen.append(idx)
        return idx

    ret = ChunkLauncher().launch(fn, list(split_to_chunks(50, 5)), stop_when=lambda x: x == 2)
    assert ret == [0, 1, 2]
    assert seen == [0, 1, 2]


def test_launcher_workers_floor() -> None:
    assert ChunkLauncher(0).workers == 1
