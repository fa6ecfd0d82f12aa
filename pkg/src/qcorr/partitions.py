"""Set partitions whose blocks all have at least two elements."""
from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence

from .errors import ShapeError

Partition = tuple[tuple[int, ...], ...]


def _partitions_min_block(items: tuple[int, ...], min_block: int) -> Iterator[list[tuple[int, ...]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(min_block - 1, len(rest) + 1):
        for companions in combinations(rest, k):
            remaining = tuple(x for x in rest if x not in companions)
            for tail in _partitions_min_block(remaining, min_block):
                yield [(first, *companions), *tail]


def enumerate_partitions_min2(subset: Sequence[int]) -> list[Partition]:
    """All partitions of ``subset`` into at least two blocks of size >= 2.

    Blocks are sorted internally and ordered by their smallest element; the
    list itself follows the order in which the smallest element picks its
    block-mates, e.g. ``[((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]``.
    """
    items = tuple(sorted(subset))
    if len(set(items)) != len(items):
        raise ShapeError(f"duplicate elements in {list(subset)}")
    if len(items) < 2:
        raise ShapeError("partitions need a subset of at least two elements")
    return [tuple(p) for p in _partitions_min_block(items, 2) if len(p) >= 2]
