"""Finite probability spaces, measure families, and the partition lattice.

A sub-sigma-field of a finite space is stored as the partition that
generates it (the two are in bijection), so field intersection and
union become the lattice meet and join of partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

ROW_SUM_TOL = 1e-12


class StructuralError(ValueError):
    """An input violates a structural contract (sizes, coverage, signs)."""


def as_vector(values, n: int) -> np.ndarray:
    """Validate a length-``n`` real vector and return it as a float array."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape[0] != n:
        raise StructuralError(f"expected a length-{n} vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise StructuralError(f"vector entry {bad} is not finite")
    return x


@dataclass(frozen=True)
class OutcomeSpace:
    """A finite sample space given by distinct outcome labels."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        object.__setattr__(self, "labels", tuple(str(s) for s in labels))
        if self.n < 1:
            raise StructuralError("an outcome space needs at least one outcome")
        if len(set(self.labels)) != self.n:
            raise StructuralError("outcome labels must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @classmethod
    def indexed(cls, n: int) -> "OutcomeSpace":
        return cls(str(i) for i in range(n))


@dataclass(frozen=True, eq=False)
class MeasureFamily:
    """A finite family of probability measures: one weight row per measure.

    Rows must be nonnegative and sum to 1 within ``ROW_SUM_TOL``; inputs
    outside that tolerance are rejected rather than renormalized.
    """

    weights: np.ndarray

    def __init__(self, weights):
        w = np.atleast_2d(np.asarray(weights, dtype=float))
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise StructuralError(f"weights must form an m x n grid, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise StructuralError("weights must be finite")
        if np.any(w < 0):
            row, col = np.argwhere(w < 0)[0]
            raise StructuralError(f"weights[{row}][{col}] is negative")
        sums = w.sum(axis=1)
        off = np.abs(sums - 1.0)
        if np.any(off > ROW_SUM_TOL):
            row = int(np.argmax(off))
            raise StructuralError(
                f"measure row {row} sums to {sums[row]!r}, not 1 within {ROW_SUM_TOL}"
            )
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.weights.shape[1]

    def row(self, gamma: int) -> np.ndarray:
        return self.weights[gamma]

    @classmethod
    def uniform(cls, n: int) -> "MeasureFamily":
        return cls(np.full((1, n), 1.0 / n))

    @classmethod
    def single(cls, weights) -> "MeasureFamily":
        return cls(np.asarray(weights, dtype=float)[None, :])


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty index blocks covering ``0..n-1``.

    Blocks are kept in canonical order (each block sorted, blocks sorted
    by least element), so equality of partitions is plain structural
    equality.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks: Iterable[Iterable[int]]):
        raw = [tuple(sorted(int(i) for i in b)) for b in blocks]
        for b in raw:
            if not b:
                raise StructuralError("blocks must be non-empty")
            if b[0] < 0:
                raise StructuralError(f"negative outcome index {b[0]}")
        canon = tuple(sorted(raw, key=lambda b: b[0]))
        object.__setattr__(self, "blocks", canon)
        seen: set[int] = set()
        for b in canon:
            for i in b:
                if i in seen:
                    raise StructuralError(f"blocks overlap at index {i}")
                seen.add(i)
        if not seen:
            raise StructuralError("a partition needs at least one block")
        if seen != set(range(len(seen))):
            missing = min(set(range(max(seen) + 1)) - seen)
            raise StructuralError(f"blocks do not cover index {missing}")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def k(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    @cached_property
    def block_of(self) -> np.ndarray:
        """Array mapping each outcome index to its block index."""
        out = np.empty(self.n, dtype=np.intp)
        for j, b in enumerate(self.blocks):
            out[list(b)] = j
        out.setflags(write=False)
        return out

    def refines(self, other: "Partition") -> bool:
        """True iff every block of self lies inside a block of ``other``."""
        if self.n != other.n:
            raise StructuralError(f"partition sizes differ: {self.n} vs {other.n}")
        coarse = other.block_of
        return all(len(set(coarse[list(b)])) == 1 for b in self.blocks)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls([i] for i in range(n))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls([range(n)])


class _UnionFind:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x


def _check_same_space(p1: Partition, p2: Partition) -> int:
    if p1.n != p2.n:
        raise StructuralError(f"partition sizes differ: {p1.n} vs {p2.n}")
    return p1.n


def meet(p1: Partition, p2: Partition) -> Partition:
    """Finest partition coarser than both: the intersection of the fields.

    Outcomes end up together iff they are linked by a chain of shared
    blocks, i.e. the blocks are the connected components of the graph
    whose edges join outcomes sharing a block in either partition.
    """
    n = _check_same_space(p1, p2)
    uf = _UnionFind(n)
    for p in (p1, p2):
        for b in p.blocks:
            for i in b[1:]:
                uf.union(b[0], i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    return Partition(groups.values())


def join(p1: Partition, p2: Partition) -> Partition:
    """Common refinement: all non-empty pairwise block intersections."""
    n = _check_same_space(p1, p2)
    groups: dict[tuple[int, int], list[int]] = {}
    b1, b2 = p1.block_of, p2.block_of
    for i in range(n):
        groups.setdefault((b1[i], b2[i]), []).append(i)
    return Partition(groups.values())


def null_set(family: MeasureFamily) -> frozenset[int]:
    """Outcome indices carrying zero weight under every measure of the family."""
    return frozenset(int(i) for i in np.flatnonzero(~family.weights.any(axis=0)))


def completion(p: Partition, nulls: Iterable[int]) -> Partition:
    """Partition generating the field of ``p`` together with all null sets.

    Null outcomes are split into their own singleton blocks (never
    deleted, so vectors stay index-aligned); the rest keep their block.
    """
    dead = set(int(i) for i in nulls)
    if dead and not dead <= set(range(p.n)):
        raise StructuralError("null indices must lie in the partition's index range")
    blocks: list[Iterable[int]] = [[i] for i in dead]
    for b in p.blocks:
        alive = [i for i in b if i not in dead]
        if alive:
            blocks.append(alive)
    return Partition(blocks)


def is_measurable(x, p: Partition, tol: float = 0.0) -> bool:
    """True iff ``x`` is constant on every block of ``p``.

    The default is exact equality; pass a tolerance for vectors produced
    by floating-point arithmetic.
    """
    v = as_vector(x, p.n)
    for b in p.blocks:
        vals = v[list(b)]
        if vals.max() - vals.min() > tol:
            return False
    return True
