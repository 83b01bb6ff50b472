"""Noise-pattern sources for guessing-based decoding.

A pattern is a tuple of bit positions to flip, sorted ascending; the empty
tuple is the all-zeros pattern.  A source is a plain iterator of patterns in
nonincreasing likelihood, equivalently nondecreasing weight, where weight is

* Hamming weight for the reliability-blind source,
* the sum of 1-based reliability ranks of the flipped bits for the ordered
  reliability source (integer "logistic" weight),
* the sum of flipped reliability magnitudes for the soft source.

Ties are broken the same way everywhere: lower Hamming weight first, then
lexicographically smaller flip-position tuple.  With all reliabilities equal
the soft order therefore degenerates to the Hamming order exactly.

Soft weights are computed with ``math.fsum`` so a pattern's weight is the
exactly rounded sum of its magnitudes, independent of accumulation order;
oracles summing the same magnitudes any other way get bit-identical values.
"""

from __future__ import annotations

import heapq
import itertools
from math import fsum
from typing import Iterable, Iterator

import numpy as np

Pattern = tuple[int, ...]


def hamming_source(n: int) -> Iterator[Pattern]:
    """All 2^n patterns by Hamming weight, position-lexicographic within weight."""
    yield ()
    for w in range(1, n + 1):
        yield from itertools.combinations(range(n), w)


def reliability_ranks(reliabilities: np.ndarray) -> np.ndarray:
    """1-based rank of each position's magnitude, ascending, stable on ties."""
    mags = np.abs(np.asarray(reliabilities, dtype=np.float64))
    order = np.argsort(mags, kind="stable")
    ranks = np.empty(len(mags), dtype=np.int64)
    ranks[order] = np.arange(1, len(mags) + 1)
    return ranks


def _distinct_partitions(total: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into strictly decreasing parts <= max_part."""
    if total == 0:
        yield ()
        return
    first = min(total, max_part)
    while first > 0 and first * (first + 1) // 2 >= total:
        if total - first <= first * (first - 1) // 2:
            for rest in _distinct_partitions(total - first, first - 1):
                yield (first, *rest)
        first -= 1


def orb_source(reliabilities: np.ndarray) -> Iterator[Pattern]:
    """Patterns by nondecreasing logistic weight (sum of flipped ranks).

    A weight class is enumerated through the distinct-part integer
    partitions of its value, each partition naming the set of ranks to
    flip; classes are emitted in the common graded tie-break order.
    """
    mags = np.abs(np.asarray(reliabilities, dtype=np.float64))
    if not np.all(np.isfinite(mags)):
        raise ValueError("reliabilities must be finite")
    n = len(mags)
    order = np.argsort(mags, kind="stable")  # order[r-1] = position with rank r
    for lw in range(0, n * (n + 1) // 2 + 1):
        batch = [
            tuple(sorted(int(order[r - 1]) for r in ranks))
            for ranks in _distinct_partitions(lw, n)
        ]
        batch.sort(key=lambda p: (len(p), p))
        yield from batch


def sgrand_source(reliabilities: np.ndarray) -> Iterator[Pattern]:
    """Patterns by exactly nondecreasing sum of flipped magnitudes.

    Maintains a heap over rank subsets.  A popped pattern with largest rank
    r schedules two successors: the subset extended with rank r+1 and the
    subset with r swapped for r+1.  Every subset is generated exactly once
    (its parent drops the largest rank, or steps it down when the rank below
    is free) and neither move can lower the weight, so pops leave the heap
    in weight order; the heap key carries the graded tie-break.
    """
    mags = np.abs(np.asarray(reliabilities, dtype=np.float64))
    if not np.all(np.isfinite(mags)):
        raise ValueError("reliabilities must be finite")
    n = len(mags)
    if n == 0:
        yield ()
        return
    if np.all(mags == mags[0]):
        # Degenerate reliabilities: the graded order is the Hamming order.
        yield from hamming_source(n)
        return
    order = np.argsort(mags, kind="stable")
    s = mags[order]

    def entry(ranks: Pattern) -> tuple[float, int, Pattern, Pattern]:
        pos = tuple(sorted(int(order[r]) for r in ranks))
        return (fsum(s[r] for r in ranks), len(ranks), pos, ranks)

    heap = [entry(())]
    while heap:
        _, _, pos, ranks = heapq.heappop(heap)
        yield pos
        if not ranks:
            heapq.heappush(heap, entry((0,)))
            continue
        last = ranks[-1]
        if last + 1 < n:
            heapq.heappush(heap, entry(ranks + (last + 1,)))
            heapq.heappush(heap, entry(ranks[:-1] + (last + 1,)))


def masked(source: Iterable[Pattern], frozen: Iterable[int]) -> Iterator[Pattern]:
    """Drop patterns touching frozen positions, preserving relative order."""
    frozen_set = frozenset(int(p) for p in frozen)
    for pattern in source:
        if not frozen_set.intersection(pattern):
            yield pattern


def pattern_weight(pattern: Pattern, reliabilities: np.ndarray) -> float:
    """Exactly rounded sum of flipped reliability magnitudes."""
    mags = np.abs(np.asarray(reliabilities, dtype=np.float64))
    return fsum(mags[p] for p in pattern)


def make_source(kind: str, n: int, reliabilities: np.ndarray | None = None) -> Iterator[Pattern]:
    """Source factory: "hamming" needs only n, the others need reliabilities."""
    if kind == "hamming":
        return hamming_source(n)
    if reliabilities is None:
        raise ValueError(f"source {kind!r} needs reliabilities")
    if len(reliabilities) != n:
        raise ValueError(f"need {n} reliabilities, got {len(reliabilities)}")
    if kind == "orbgrand":
        return orb_source(reliabilities)
    if kind == "sgrand":
        return sgrand_source(reliabilities)
    raise ValueError(f"unknown pattern source {kind!r}")
