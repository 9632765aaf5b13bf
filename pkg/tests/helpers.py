"""Independent reference implementations used only by the tests.

These are deliberately naive: exhaustive search and direct recounts,
written without touching the package's matching or coloring code.
"""
from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from hypothesis import strategies as st

from biregular.model import WeightMatrix


def count_contingency(row_sums, col_sums) -> int:
    """Number of non-negative integer matrices with the given margins."""
    row_sums = tuple(row_sums)

    @lru_cache(maxsize=None)
    def rec(i, cols):
        if i == len(row_sums):
            return int(not any(cols))
        total = 0
        for fill in _splits(row_sums[i], cols):
            total += rec(i + 1, tuple(c - x for c, x in zip(cols, fill)))
        return total

    return rec(0, tuple(col_sums))


def _splits(total, caps):
    if not caps:
        if total == 0:
            yield ()
        return
    for x in range(min(total, caps[0]) + 1):
        for rest in _splits(total - x, caps[1:]):
            yield (x,) + rest


def recount_bracket(left, right, rows, cols):
    c = Counter(zip(left, right))
    return [[c[(a, b)] for b in range(cols)] for a in range(rows)]


def is_all_ones(left, right, rows, cols) -> bool:
    return recount_bracket(left, right, rows, cols) == [[1] * cols for _ in range(rows)]


def brute_max_bipartite(adj) -> int:
    """Maximum matching size by trying every assignment of left vertices."""
    nl = len(adj)
    nr = len(adj[0]) if nl else 0
    best = 0

    def rec(i, used, size):
        nonlocal best
        if size + (nl - i) <= best:
            return
        if i == nl:
            best = max(best, size)
            return
        for j in range(nr):
            if adj[i][j] and not used >> j & 1:
                rec(i + 1, used | 1 << j, size + 1)
        rec(i + 1, used, size)

    rec(0, 0, 0)
    return best


def brute_hall(adj) -> Fraction:
    nl = len(adj)
    best = None
    for r in range(1, nl + 1):
        for X in combinations(range(nl), r):
            nb = {j for i in X for j, m in enumerate(adj[i]) if m}
            val = Fraction(len(nb), r)
            if best is None or val < best:
                best = val
    return best


def brute_perfect_simple(adj) -> bool:
    """Perfect matching in a loop-free simple graph, exhaustively."""
    size = len(adj)

    def rec(free):
        if not free:
            return True
        v = min(free)
        rest = free - {v}
        return any(adj[v][w] and rec(rest - {w}) for w in rest)

    return rec(frozenset(range(size)))


def neighborhood(adj, X):
    return {j for i in X for j, m in enumerate(adj[i]) if m}


def random_adj(rng: random.Random, nl: int, nr: int, p: float = 0.5, maxmult: int = 1):
    return [[rng.randint(1, maxmult) if rng.random() < p else 0 for _ in range(nr)] for _ in range(nl)]


def random_loop_adj(rng: random.Random, size: int, p: float = 0.35, loop_p: float = 0.2):
    adj = [[0] * size for _ in range(size)]
    for i in range(size):
        if rng.random() < loop_p:
            adj[i][i] = 1
        for j in range(i + 1, size):
            if rng.random() < p:
                adj[i][j] = adj[j][i] = 1
    return adj


@st.composite
def bip_matrices(draw, max_left=5, max_right=5, max_mult=2):
    nl = draw(st.integers(1, max_left))
    nr = draw(st.integers(1, max_right))
    rows = draw(st.lists(st.lists(st.integers(0, max_mult), min_size=nr, max_size=nr),
                         min_size=nl, max_size=nl))
    return WeightMatrix.of(rows)


@st.composite
def loop_adjacency(draw, max_size=7):
    size = draw(st.integers(1, max_size))
    adj = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            x = draw(st.integers(0, 1))
            adj[i][j] = adj[j][i] = x
    return adj
