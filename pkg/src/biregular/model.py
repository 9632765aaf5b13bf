"""Labeled bipartite multigraphs, bracket matrices and the B(n, k) domain.

Parts are disjoint integer ranges ``[0, n)`` and ``[0, k)``.  An edge is a
``(left, right)`` pair and its identity is its position in the edge list, so
multi-edges are repeated pairs and involutions are plain index permutations.
All arithmetic is exact integer.
"""
from __future__ import annotations

import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .errors import BudgetExceeded, PreconditionError


def canonical_json(obj) -> str:
    """Serialize with sorted keys and no whitespace (byte-stable)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class WeightMatrix:
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        data = tuple(tuple(int(x) for x in row) for row in self.data)
        object.__setattr__(self, "data", data)
        if not data or not data[0]:
            raise PreconditionError("weight matrix must be non-empty")
        width = len(data[0])
        for row in data:
            if len(row) != width:
                raise PreconditionError("ragged weight matrix")
            if any(x < 0 for x in row):
                raise PreconditionError("weights must be non-negative")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> WeightMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> WeightMatrix:
        return cls(((0,) * cols,) * rows)

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    def __getitem__(self, idx: tuple[int, int]) -> int:
        return self.data[idx[0]][idx[1]]

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.data]

    def col_sums(self) -> list[int]:
        return [sum(c) for c in zip(*self.data)]

    def total(self) -> int:
        return sum(self.row_sums())

    def transpose(self) -> WeightMatrix:
        return WeightMatrix(tuple(zip(*self.data)))

    def support(self) -> WeightMatrix:
        return WeightMatrix(tuple(tuple(1 if x else 0 for x in r) for r in self.data))

    def is_binary(self) -> bool:
        return all(x in (0, 1) for r in self.data for x in r)

    def in_bnk(self) -> bool:
        """Membership in B(n, k): every row sums to k, every column to n."""
        n, k = self.rows, self.cols
        return all(s == k for s in self.row_sums()) and all(s == n for s in self.col_sums())

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": self.to_list()}

    @classmethod
    def from_json(cls, doc: dict) -> WeightMatrix:
        mat = cls.of(doc["data"])
        if mat.rows != doc["rows"] or mat.cols != doc["cols"]:
            raise PreconditionError("matrix dimensions do not match data grid")
        return mat


@dataclass(frozen=True)
class LabeledBigraph:
    """The tuple (L, R, E, u, v) as an edge list."""

    left_size: int
    right_size: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.left_size < 1 or self.right_size < 1:
            raise PreconditionError("parts must be non-empty")
        for a, b in edges:
            if not (0 <= a < self.left_size and 0 <= b < self.right_size):
                raise PreconditionError(f"edge {(a, b)} out of range")

    @property
    def n(self) -> int:
        return self.left_size

    @property
    def k(self) -> int:
        return self.right_size

    @property
    def u(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.edges)

    @property
    def v(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def left_degrees(self) -> list[int]:
        deg = [0] * self.left_size
        for a, _ in self.edges:
            deg[a] += 1
        return deg

    def right_degrees(self) -> list[int]:
        deg = [0] * self.right_size
        for _, b in self.edges:
            deg[b] += 1
        return deg

    def is_biregular(self) -> bool:
        return len(set(self.left_degrees())) == 1 and len(set(self.right_degrees())) == 1

    def in_ank(self) -> bool:
        """Biregular with |E| = n*k, i.e. a member of A(n, k)."""
        return len(self.edges) == self.n * self.k and self.is_biregular()

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, doc: dict) -> LabeledBigraph:
        return cls(int(doc["n"]), int(doc["k"]), tuple(tuple(e) for e in doc["edges"]))


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise PreconditionError("not a bijection")

    @classmethod
    def identity(cls, size: int) -> Permutation:
        return cls(tuple(range(size)))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def compose(self, other: Permutation) -> Permutation:
        """``self ∘ other``: apply ``other`` first."""
        return Permutation(tuple(self.images[j] for j in other.images))


@dataclass(frozen=True)
class Involution:
    """Self-inverse permutation of edge indices; fixed points allowed."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        object.__setattr__(self, "map", m)
        size = len(m)
        for i, j in enumerate(m):
            if not 0 <= j < size or m[j] != i:
                raise PreconditionError(f"not an involution at index {i}")

    @classmethod
    def identity(cls, size: int) -> Involution:
        return cls(tuple(range(size)))

    def __call__(self, i: int) -> int:
        return self.map[i]

    def __len__(self) -> int:
        return len(self.map)

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.map) if i == j]


def bracket_pair(f: Sequence[int], h: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> WeightMatrix:
    """Count matrix ``entry(a, b) = #{e : f(e) = a, h(e) = b}``."""
    if len(f) != len(h):
        raise PreconditionError("labelings have different domains")
    rows = rows if rows is not None else (max(f) + 1 if f else 1)
    cols = cols if cols is not None else (max(h) + 1 if h else 1)
    grid = [[0] * cols for _ in range(rows)]
    for a, b in zip(f, h):
        grid[a][b] += 1
    return WeightMatrix.of(grid)


def bracket(g: LabeledBigraph) -> WeightMatrix:
    return bracket_pair(g.u, g.v, g.n, g.k)


def uniform_matrix(n: int, k: int) -> WeightMatrix:
    if n < 1 or k < 1:
        raise PreconditionError("dimensions must be positive")
    return WeightMatrix(((1,) * k,) * n)


def instance_from_matrix(B: WeightMatrix) -> LabeledBigraph:
    """Row-major expansion of a weight matrix into an edge list."""
    edges = []
    for x, row in enumerate(B.data):
        for y, w in enumerate(row):
            edges.extend([(x, y)] * w)
    return LabeledBigraph(B.rows, B.cols, tuple(edges))


def apply_involution(g: LabeledBigraph, iota: Involution) -> LabeledBigraph:
    """Edge ``e`` receives left label ``u(iota(e))``; right labels stay."""
    if len(iota) != len(g.edges):
        raise PreconditionError("involution size does not match edge count")
    u = g.u
    edges = tuple((u[iota(e)], b) for e, (_, b) in enumerate(g.edges))
    return LabeledBigraph(g.n, g.k, edges)


def compose_labels(labels: Sequence[int], perm: Sequence[int] | Permutation | Involution) -> tuple[int, ...]:
    """``labels ∘ perm`` as a tuple over the edge range."""
    images = perm.images if isinstance(perm, Permutation) else (
        perm.map if isinstance(perm, Involution) else perm)
    return tuple(labels[j] for j in images)


def enumerate_bnk(n: int, k: int, budget: int | None = None,
                  prefix: Sequence[Sequence[int]] = ()) -> Iterator[WeightMatrix]:
    """Yield every matrix of B(n, k) once, ascending lexicographic row-major.

    ``prefix`` pins the leading rows so a campaign can shard the domain.
    When more than ``budget`` matrices would be produced, ``BudgetExceeded``
    is raised after the first ``budget`` have been yielded.
    """
    if n < 1 or k < 1:
        raise PreconditionError("dimensions must be positive")
    colrem = [n] * k
    rows: list[tuple[int, ...]] = []
    for row in prefix:
        row = tuple(int(x) for x in row)
        if len(row) != k or sum(row) != k or any(x < 0 or x > c for x, c in zip(row, colrem)):
            return
        rows.append(row)
        colrem = [c - x for c, x in zip(colrem, row)]
    count = 0

    def row_choices(remaining_rows: int) -> Iterator[tuple[int, ...]]:
        # a row is admissible if the leftover column budget stays reachable
        cur = [0] * k

        def fill(j: int, left: int) -> Iterator[tuple[int, ...]]:
            if j == k - 1:
                if left <= colrem[j] and colrem[j] - left <= k * (remaining_rows - 1):
                    cur[j] = left
                    yield tuple(cur)
                return
            for x in range(0, min(left, colrem[j]) + 1):
                if colrem[j] - x > k * (remaining_rows - 1):
                    continue
                cur[j] = x
                yield from fill(j + 1, left - x)

        yield from fill(0, k)

    def rec() -> Iterator[WeightMatrix]:
        nonlocal colrem, count
        if len(rows) == n:
            if all(c == 0 for c in colrem):
                count += 1
                if budget is not None and count > budget:
                    raise BudgetExceeded(f"B({n},{k}) enumeration exceeded budget {budget}", count - 1)
                yield WeightMatrix(tuple(rows))
            return
        for row in list(row_choices(n - len(rows))):
            rows.append(row)
            saved = colrem
            colrem = [c - x for c, x in zip(colrem, row)]
            yield from rec()
            colrem = saved
            rows.pop()

    yield from rec()
