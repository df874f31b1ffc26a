"""Set partitions of ``{0, ..., n-1}`` for the Faa di Bruno formula.

Parts are kept in canonical order: sorted by their largest element, each part
listed in increasing order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class SetPartition:
    ground_size: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(i for part in self.parts for i in part)
        if seen != list(range(self.ground_size)):
            raise ValueError(f"parts {self.parts} do not partition range({self.ground_size})")
        if any(len(part) == 0 for part in self.parts):
            raise ValueError("empty part")
        if any(list(part) != sorted(part) for part in self.parts):
            raise ValueError("parts must be increasing")
        maxes = [part[-1] for part in self.parts]
        if maxes != sorted(maxes):
            raise ValueError("parts must be ordered by their maxima")

    @classmethod
    def from_blocks(cls, ground_size: int, blocks) -> "SetPartition":
        """Canonicalize an arbitrary collection of blocks."""
        parts = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[-1])
        return cls(ground_size, tuple(parts))

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def part_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def as_frozenset(self) -> frozenset:
        return frozenset(frozenset(p) for p in self.parts)


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """All ``a`` of length ``n`` with ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``."""
    if n == 0:
        yield []
        return
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield list(a)
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_partitions(n: int) -> list[SetPartition]:
    """Every partition of ``{0..n-1}`` exactly once, in restricted-growth order."""
    out = []
    for rgs in restricted_growth_strings(n):
        blocks: dict[int, list[int]] = {}
        for i, label in enumerate(rgs):
            blocks.setdefault(label, []).append(i)
        out.append(SetPartition.from_blocks(n, blocks.values()))
    return out


def extend_partition(P: SetPartition) -> list[SetPartition]:
    """Partitions of ``{0..n}`` obtained by adding a new least element.

    Old element ``i`` is relabelled ``i + 1`` and the new element is ``0``. The
    first result has ``{0}`` as a new singleton part (placed first, since its
    maximum is smallest); result ``m + 1`` inserts ``0`` into part ``m``.
    """
    shifted = [tuple(i + 1 for i in part) for part in P.parts]
    n = P.ground_size + 1
    out = [SetPartition(n, ((0,),) + tuple(shifted))]
    for m in range(len(shifted)):
        parts = list(shifted)
        parts[m] = (0,) + parts[m]
        out.append(SetPartition(n, tuple(parts)))
    return out


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def ordered_compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of ``n`` into positive parts, by first-part length."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in ordered_compositions(n - first):
            yield (first,) + rest
