"""Symmetric cell product M⊗Mᵀ and the bipartite tensor product.

Cells ``(x, y)`` of an ``n x k`` matrix are linearized as ``x * k + y``
everywhere, including serialized output.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .matching import LoopGraph
from .model import WeightMatrix


def cell_index(x: int, y: int, k: int) -> int:
    return x * k + y


def cell_of(index: int, k: int) -> tuple[int, int]:
    return divmod(index, k)


@dataclass(frozen=True)
class CellIndexedMatrix:
    n: int
    k: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        size = self.n * self.k
        if len(self.data) != size or any(len(r) != size for r in self.data):
            raise PreconditionError("cell matrix must be (n*k) x (n*k)")

    def __getitem__(self, idx) -> int:
        (x1, y1), (x2, y2) = idx
        return self.data[cell_index(x1, y1, self.k)][cell_index(x2, y2, self.k)]

    @property
    def size(self) -> int:
        return self.n * self.k

    def is_symmetric(self) -> bool:
        return all(self.data[i][j] == self.data[j][i]
                   for i in range(self.size) for j in range(i + 1, self.size))

    def loop_cells(self) -> list[tuple[int, int]]:
        return [cell_of(i, self.k) for i in range(self.size) if self.data[i][i]]

    def as_bipartite(self) -> WeightMatrix:
        """Bipartite double cover: two copies of the cells, this matrix as adjacency."""
        return WeightMatrix(self.data)

    def as_loop_graph(self) -> LoopGraph:
        """Ordinary graph on the cells; nonzero diagonal entries become loops."""
        return LoopGraph(self.size, self.data)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "linearization": "row-major",
                "data": [list(r) for r in self.data]}

    @classmethod
    def from_json(cls, doc: dict) -> CellIndexedMatrix:
        if doc.get("linearization", "row-major") != "row-major":
            raise PreconditionError("only row-major cell linearization is supported")
        return cls(int(doc["n"]), int(doc["k"]), tuple(tuple(int(x) for x in r) for r in doc["data"]))


def symmetric_product(M: WeightMatrix) -> CellIndexedMatrix:
    """``entry((x1, y1), (x2, y2)) = M(x1, y2) * M(x2, y1)``."""
    n, k = M.rows, M.cols
    cells = [(x, y) for x in range(n) for y in range(k)]
    data = tuple(tuple(M[x1, y2] * M[x2, y1] for (x2, y2) in cells) for (x1, y1) in cells)
    return CellIndexedMatrix(n, k, data)


def bigraph_tensor(G: WeightMatrix, H: WeightMatrix) -> WeightMatrix:
    """Left part L_G x L_H, right part R_G x R_H, multiplicities multiply.

    Pair ``(a, c)`` is linearized as ``a * |L_H| + c`` (likewise on the right).
    """
    rows = []
    for a in range(G.rows):
        for c in range(H.rows):
            rows.append(tuple(G[a, b] * H[c, d] for b in range(G.cols) for d in range(H.cols)))
    return WeightMatrix(tuple(rows))


def complete_bipartite(p: int, q: int) -> WeightMatrix:
    if p < 1 or q < 1:
        raise PreconditionError("parts must be non-empty")
    return WeightMatrix(((1,) * q,) * p)
