"""Seeded random instances.

B(n, k) members come from a random walk of 2x2 +-1 moves started at the
all-ones matrix; the moves preserve every row and column sum, so membership
is exact at every step.
"""
from __future__ import annotations

import random
from collections.abc import Sequence

from .errors import PreconditionError
from .model import LabeledBigraph, WeightMatrix, instance_from_matrix

DEFAULT_BURN_IN = 200


def northwest_corner(row_sums: Sequence[int], col_sums: Sequence[int]) -> list[list[int]]:
    if sum(row_sums) != sum(col_sums):
        raise PreconditionError("margins have different totals")
    rows, cols = list(row_sums), list(col_sums)
    grid = [[0] * len(cols) for _ in rows]
    i = j = 0
    while i < len(rows) and j < len(cols):
        x = min(rows[i], cols[j])
        grid[i][j] = x
        rows[i] -= x
        cols[j] -= x
        if rows[i] == 0:
            i += 1
        else:
            j += 1
    return grid


def random_walk(grid: list[list[int]], rng: random.Random, steps: int) -> list[list[int]]:
    """Margin-preserving walk: +1 at (i, j), (i2, j2); -1 at (i, j2), (i2, j)."""
    n, k = len(grid), len(grid[0])
    if n < 2 or k < 2:
        return grid
    for _ in range(steps):
        i, i2 = rng.sample(range(n), 2)
        j, j2 = rng.sample(range(k), 2)
        if grid[i][j2] > 0 and grid[i2][j] > 0:
            grid[i][j] += 1
            grid[i2][j2] += 1
            grid[i][j2] -= 1
            grid[i2][j] -= 1
    return grid


def random_margin_matrix(row_sums: Sequence[int], col_sums: Sequence[int], rng: random.Random,
                         burn_in: int = DEFAULT_BURN_IN) -> WeightMatrix:
    return WeightMatrix.of(random_walk(northwest_corner(row_sums, col_sums), rng, burn_in))


def random_bnk(n: int, k: int, rng: random.Random, burn_in: int = DEFAULT_BURN_IN) -> WeightMatrix:
    return WeightMatrix.of(random_walk([[1] * k for _ in range(n)], rng, burn_in))


def shuffled_instance(B: WeightMatrix, rng: random.Random) -> LabeledBigraph:
    g = instance_from_matrix(B)
    edges = list(g.edges)
    rng.shuffle(edges)
    return LabeledBigraph(g.n, g.k, tuple(edges))


def random_instance(n: int, k: int, seed: int | random.Random = 0,
                    burn_in: int = DEFAULT_BURN_IN) -> LabeledBigraph:
    """Random member of A(n, k) with shuffled edge order."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return shuffled_instance(random_bnk(n, k, rng, burn_in), rng)


def random_biregular(n: int, k: int, left_degree: int, right_degree: int,
                     rng: random.Random, burn_in: int = DEFAULT_BURN_IN) -> LabeledBigraph:
    if n * left_degree != k * right_degree:
        raise PreconditionError("degree sums disagree")
    B = random_margin_matrix([left_degree] * n, [right_degree] * k, rng, burn_in)
    return shuffled_instance(B, rng)
