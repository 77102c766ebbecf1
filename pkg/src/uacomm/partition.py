"""Equivalence relations on {0..n-1} in canonical least-element form."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .relations import BitRelation, CarrierMismatch


class PartitionParseError(ValueError):
    pass


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # least element stays the root
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True

    def labels(self) -> tuple[int, ...]:
        return tuple(self.find(i) for i in range(len(self.parent)))


class Partition:
    """An equivalence relation; ``labels[i]`` is the least element of i's block."""

    __slots__ = ("labels", "_arr")

    def __init__(self, labels: Sequence[int]):
        labels = tuple(labels)
        if not labels:
            raise ValueError("a partition needs a nonempty carrier")
        # canonicalize any hashable block labelling to least-element form
        least: dict = {}
        for i, lab in enumerate(labels):
            least.setdefault(lab, i)
        self.labels = tuple(least[lab] for lab in labels)
        self._arr = None

    @property
    def carrier_size(self) -> int:
        return len(self.labels)

    @property
    def array(self) -> np.ndarray:
        if self._arr is None:
            arr = np.array(self.labels, dtype=np.int64)
            arr.setflags(write=False)
            self._arr = arr
        return self._arr

    @classmethod
    def bottom(cls, n: int) -> "Partition":
        return cls(range(n))

    @classmethod
    def top(cls, n: int) -> "Partition":
        return cls([0] * n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        uf = UnionFind(n)
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"pair ({x},{y}) outside carrier of size {n}")
            uf.union(x, y)
        return cls(uf.labels())

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        labels = list(range(n))
        seen = set()
        for block in blocks:
            block = sorted(block)
            for x in block:
                if not 0 <= x < n:
                    raise ValueError(f"element {x} outside carrier of size {n}")
                if x in seen:
                    raise ValueError(f"element {x} appears in two blocks")
                seen.add(x)
                labels[x] = block[0]
        return cls(labels)

    @classmethod
    def from_relation(cls, r: BitRelation) -> "Partition":
        if not r.is_equivalence():
            raise ValueError("relation is not an equivalence")
        return cls.from_pairs(r.carrier_size, r.pairs())

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, lab in enumerate(self.labels):
            out.setdefault(lab, []).append(i)
        return [out[k] for k in sorted(out)]

    def num_blocks(self) -> int:
        return len(set(self.labels))

    def related(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    def relation(self) -> BitRelation:
        a = self.array
        return BitRelation(a[:, None] == a[None, :])

    def pairs(self) -> list[tuple[int, int]]:
        return self.relation().pairs()

    def is_bottom(self) -> bool:
        return self.num_blocks() == self.carrier_size

    def is_top(self) -> bool:
        return self.num_blocks() == 1

    def _check(self, other: "Partition") -> None:
        if self.carrier_size != other.carrier_size:
            raise CarrierMismatch(f"carrier sizes differ: {self.carrier_size} vs {other.carrier_size}")

    def __le__(self, other: "Partition") -> bool:
        self._check(other)
        q = other.labels
        return all(q[i] == q[lab] for i, lab in enumerate(self.labels))

    def __ge__(self, other: "Partition") -> bool:
        return other <= self

    def __lt__(self, other: "Partition") -> bool:
        return self <= other and self != other

    def __gt__(self, other: "Partition") -> bool:
        return other < self

    def __and__(self, other: "Partition") -> "Partition":
        self._check(other)
        return Partition(list(zip(self.labels, other.labels)))

    def __or__(self, other: "Partition") -> "Partition":
        self._check(other)
        uf = UnionFind(self.carrier_size)
        for i in range(self.carrier_size):
            uf.union(i, self.labels[i])
            uf.union(i, other.labels[i])
        return Partition(uf.labels())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"Partition({format_partition(self)!r})"

    def __str__(self) -> str:
        return format_partition(self)


def format_partition(p: Partition) -> str:
    return "|".join(" ".join(str(x) for x in block) for block in p.blocks())


def parse_partition(text: str, n: int) -> Partition:
    """Parse block notation ``0 2|1 3``; unlisted elements become singletons."""
    blocks = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            blocks.append([int(tok) for tok in chunk.split()])
        except ValueError as exc:
            raise PartitionParseError(f"bad partition literal {text!r}: {exc}") from exc
    try:
        return Partition.from_blocks(n, blocks)
    except ValueError as exc:
        raise PartitionParseError(f"bad partition literal {text!r}: {exc}") from exc
